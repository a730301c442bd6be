"""Simple Euclidean Jordan algebras with element arithmetic.

Five kinds are supported, each realized on an orthonormal coordinate basis:

    sym     real symmetric r x r matrices,        d = 1, n = r(r+1)/2
    herm    complex Hermitian r x r matrices,     d = 2, n = r^2
    quat    quaternion Hermitian r x r matrices,  d = 4, n = r(2r-1)
    albert  octonion Hermitian 3 x 3 matrices,    d = 8, n = 27 (rank 3 only)
    spin    R x E with the Lorentz-cone product,  d = dim E - 1, n = dim E + 1

For the matrix kinds the Jordan product is x o y = (xy + yx)/2 in the
underlying (possibly non-associative) entry algebra, the trace is the sum
of the (real) diagonal entries, and the inner product <x, y> = tr(x o y)
reduces to the Euclidean dot product of the entry arrays.  The coordinate
basis consists of the unit diagonal matrices and, for every pair s < t and
every entry unit u_m, the Hermitian matrix with u_m/sqrt(2) in position
(s, t).  For the spin kind the product between x = (x0, xv) and
y = (y0, yv) is

    x o y = (x0 y0 + xv . yv,  x0 yv + y0 xv),

the trace is 2 x0, and the orthonormal basis is (1, 0)/sqrt(2) together
with (0, ev_i)/sqrt(2).

In all cases the dimension satisfies n = r + (d/2) r (r - 1), every basis
satisfies <e_i, e_j> = delta_ij, and the structure constants
c[i][j][k] = <e_i o e_j, e_k> are fully symmetric because the trace form
is associative.  Everything is immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import (
    AlgebraError,
    AlgebraMismatchError,
    DomainError,
    FrameError,
    StructuralFailureError,
)
from .hypercomplex import mult_table

SQRT2 = float(np.sqrt(2.0))


class AlgebraKind(str, Enum):
    SYM_REAL = "sym"
    HERM_COMPLEX = "herm"
    HERM_QUATERNION = "quat"
    SPIN_FACTOR = "spin"
    ALBERT = "albert"

    @classmethod
    def parse(cls, value) -> "AlgebraKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise AlgebraError(
                f"unknown algebra kind {value!r}; expected one of "
                f"{[k.value for k in cls]}"
            ) from None

    @property
    def entry_degree(self) -> Optional[int]:
        """Real dimension of the entry algebra for the matrix kinds."""
        return {
            AlgebraKind.SYM_REAL: 1,
            AlgebraKind.HERM_COMPLEX: 2,
            AlgebraKind.HERM_QUATERNION: 4,
            AlgebraKind.ALBERT: 8,
        }.get(self)


@dataclass(frozen=True, eq=False)
class Element:
    """Coordinate vector over the algebra's orthonormal basis."""

    algebra: "JordanAlgebra"
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (self.algebra.n,):
            raise AlgebraMismatchError(
                f"expected {self.algebra.n} coordinates, got shape {coords.shape}"
            )
        coords = coords.copy()
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "Element") -> "Element":
        _require_same_algebra(self, other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        _require_same_algebra(self, other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.product(self, other)
        return Element(self.algebra, float(other) * self.coords)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def trace(self) -> float:
        return self.algebra.trace(self)

    def __repr__(self):
        return f"Element({self.algebra.key_str()}, {np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class SymEndo:
    """Symmetric endomorphism of the algebra, as an n x n array in the
    orthonormal coordinate basis.  Doubles as a quadratic form via
    q(x) = <f(x), x>."""

    algebra: "JordanAlgebra"
    mat: np.ndarray

    SYM_TOL = 1e-12

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        n = self.algebra.n
        if mat.shape != (n, n):
            raise AlgebraMismatchError(f"expected ({n},{n}) matrix, got {mat.shape}")
        scale = 1.0 + np.abs(mat).max()
        if np.abs(mat - mat.T).max() > self.SYM_TOL * scale:
            raise DomainError("matrix is not symmetric within tolerance")
        mat = 0.5 * (mat + mat.T)
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    def apply(self, x: Element) -> Element:
        _require_same_algebra(self, x)
        return Element(self.algebra, self.mat @ x.coords)

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def __add__(self, other: "SymEndo") -> "SymEndo":
        _require_same_algebra(self, other)
        return SymEndo(self.algebra, self.mat + other.mat)

    def __sub__(self, other: "SymEndo") -> "SymEndo":
        _require_same_algebra(self, other)
        return SymEndo(self.algebra, self.mat - other.mat)

    def __mul__(self, scalar) -> "SymEndo":
        return SymEndo(self.algebra, float(scalar) * self.mat)

    __rmul__ = __mul__

    def operator_trace(self) -> float:
        return float(np.trace(self.mat))


@dataclass(frozen=True)
class JordanFrame:
    """Complete system of orthogonal primitive idempotents c_1, ..., c_r."""

    algebra: "JordanAlgebra"
    idempotents: tuple

    def __len__(self):
        return len(self.idempotents)


@dataclass(frozen=True, eq=False)
class PeirceBasis:
    """Orthonormal element basis adapted to the Peirce decomposition of a frame.

    ``blocks[(s, t)]`` holds the basis of V_st as rows (s == t gives the span
    of c_s, s < t the d-dimensional joint 1/2-eigenspace of L(c_s), L(c_t)).
    ``matrix`` has the flattened basis as columns; ``labels[k]`` is either
    ("diag", s) or ("off", s, t, m).
    """

    algebra: "JordanAlgebra"
    frame: JordanFrame
    blocks: dict
    labels: tuple
    matrix: np.ndarray

    @property
    def flattened(self):
        return [Element(self.algebra, self.matrix[:, k]) for k in range(self.algebra.n)]


def _require_same_algebra(a, b):
    if a.algebra.key() != b.algebra.key():
        raise AlgebraMismatchError(
            f"mixed-algebra arithmetic: {a.algebra.key_str()} vs {b.algebra.key_str()}"
        )


@dataclass(frozen=True, eq=False)
class JordanAlgebra:
    """Immutable descriptor of a simple Euclidean Jordan algebra."""

    kind: AlgebraKind
    r: int
    d: int
    n: int
    product_tensor: np.ndarray
    ambient_dim: Optional[int] = None
    entry_basis: Optional[np.ndarray] = None
    basis_labels: tuple = field(default=())

    def key(self):
        return (self.kind, self.r, self.ambient_dim)

    def key_str(self) -> str:
        if self.kind is AlgebraKind.SPIN_FACTOR:
            return f"spin(dimE={self.ambient_dim})"
        return f"{self.kind.value}(r={self.r})"

    # ---- basic structure -------------------------------------------------

    @property
    def identity(self) -> Element:
        coords = np.zeros(self.n)
        if self.kind is AlgebraKind.SPIN_FACTOR:
            coords[0] = SQRT2
        else:
            coords[: self.r] = 1.0
        return Element(self, coords)

    def element(self, coords) -> Element:
        return Element(self, coords)

    def basis_element(self, i: int) -> Element:
        coords = np.zeros(self.n)
        coords[i] = 1.0
        return Element(self, coords)

    @property
    def basis(self):
        return [self.basis_element(i) for i in range(self.n)]

    def _require_mine(self, x):
        if x.algebra.key() != self.key():
            raise AlgebraMismatchError(
                f"element of {x.algebra.key_str()} used with {self.key_str()}"
            )

    def product(self, x: Element, y: Element) -> Element:
        _require_same_algebra(x, y)
        self._require_mine(x)
        return Element(self, self.product_coords(x.coords, y.coords))

    def product_coords(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.product_tensor)

    def lmat(self, coords: np.ndarray) -> np.ndarray:
        # L(x)[k, j] = <x o e_j, e_k>; symmetric because the tensor is.
        return np.einsum("i,ijk->jk", coords, self.product_tensor)

    def lmap(self, x: Element) -> SymEndo:
        """Multiplication operator y -> x o y."""
        self._require_mine(x)
        return SymEndo(self, self.lmat(x.coords))

    def pmat(self, coords: np.ndarray) -> np.ndarray:
        lx = self.lmat(coords)
        return 2.0 * lx @ lx - self.lmat(self.product_coords(coords, coords))

    def pmap(self, x: Element) -> SymEndo:
        """Quadratic representation P(x) = 2 L(x)^2 - L(x^2); for symmetric
        matrices this is z -> xzx."""
        self._require_mine(x)
        return SymEndo(self, self.pmat(x.coords))

    def trace(self, x: Element) -> float:
        # tr(x) = tr(x o e) = <x, e>
        return float(x.coords @ self.identity.coords)

    def inner(self, x: Element, y: Element) -> float:
        _require_same_algebra(x, y)
        return float(x.coords @ y.coords)

    def norm(self, x: Element) -> float:
        return float(np.linalg.norm(x.coords))

    # ---- determinant -----------------------------------------------------

    def power_trace_coords(self, coords: np.ndarray, kmax: int):
        """tr(x^k) for k = 1..kmax; powers are unambiguous by power
        associativity."""
        traces = []
        e = self.identity.coords
        xk = coords
        for k in range(1, kmax + 1):
            traces.append(float(xk @ e))
            if k < kmax:
                xk = self.product_coords(xk, coords)
        return traces

    def determinant(self, x: Element) -> float:
        """Jordan determinant: the product of the r spectral eigenvalues,
        recovered from the power traces tr(x^k) by Newton's identities.

        Agrees with the usual matrix determinant for the real symmetric and
        complex Hermitian kinds, with x0^2 - |xv|^2 for the spin kind, and
        with the square root of the complex-embedding determinant for
        quaternion Hermitian matrices.  det(e) = 1, det(ax) = a^r det(x),
        and det(P(y)x) = det(y)^2 det(x).
        """
        self._require_mine(x)
        return self.determinant_coords(x.coords)

    def determinant_coords(self, coords: np.ndarray) -> float:
        power = self.power_trace_coords(coords, self.r)
        elem = [1.0]
        for k in range(1, self.r + 1):
            acc = 0.0
            for i in range(1, k + 1):
                acc += (-1.0) ** (i - 1) * elem[k - i] * power[i - 1]
            elem.append(acc / k)
        return elem[self.r]

    # ---- cone ------------------------------------------------------------

    def min_cone_eigenvalue(self, coords: np.ndarray) -> float:
        """Smallest spectral eigenvalue of x; positive iff x is in the open
        cone.  Computed as the smallest eigenvalue of L(x), whose spectrum
        is {(lam_s + lam_t)/2} and therefore shares the minimum."""
        return float(np.linalg.eigvalsh(self.lmat(coords))[0])

    def in_cone(self, x: Element, tol: float = 0.0) -> bool:
        self._require_mine(x)
        return self.min_cone_eigenvalue(x.coords) > tol

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> Element:
        """Isotropic Gaussian element (standard normal coordinates)."""
        return Element(self, scale * rng.standard_normal(self.n))

    def random_cone_element(self, rng: np.random.Generator, margin: float = 0.1) -> Element:
        """g o g pushed safely inside the open cone."""
        g = rng.standard_normal(self.n)
        sq = self.product_coords(g, g)
        shift = margin * (1.0 + float(np.linalg.norm(sq)))
        return Element(self, sq + shift * self.identity.coords)

    # ---- frames and Peirce decomposition ----------------------------------

    def standard_frame(self) -> JordanFrame:
        if self.kind is AlgebraKind.SPIN_FACTOR:
            unit = np.zeros(self.ambient_dim)
            unit[0] = 1.0
            c1 = self.from_natural((0.5, 0.5 * unit))
            c2 = self.from_natural((0.5, -0.5 * unit))
            return JordanFrame(self, (c1, c2))
        idem = tuple(self.basis_element(s) for s in range(self.r))
        return JordanFrame(self, idem)

    def _validate_frame(self, frame: JordanFrame, tol: float = 1e-9):
        if len(frame.idempotents) != self.r:
            raise FrameError(f"frame must have {self.r} idempotents")
        total = np.zeros(self.n)
        for s, c in enumerate(frame.idempotents):
            _require_same_algebra(c, self.identity)
            sq = self.product_coords(c.coords, c.coords)
            if np.linalg.norm(sq - c.coords) > tol:
                raise FrameError(f"idempotent {s} fails c o c = c")
            if abs(self.trace(c) - 1.0) > tol:
                raise FrameError(f"idempotent {s} is not primitive (tr != 1)")
            total += c.coords
            for t in range(s):
                other = frame.idempotents[t]
                if np.linalg.norm(self.product_coords(c.coords, other.coords)) > tol:
                    raise FrameError(f"idempotents {t}, {s} are not orthogonal")
        if np.linalg.norm(total - self.identity.coords) > tol:
            raise FrameError("idempotents do not sum to the identity")

    def peirce_basis(self, frame: Optional[JordanFrame] = None) -> PeirceBasis:
        """Orthonormal basis adapted to V = sum of V_st over s <= t.

        The joint eigenspaces of the commuting family {L(c_s)} are cut out by
        the spectral-projector polynomials 2L^2 - L (eigenvalue 1) and
        4L - 4L^2 (eigenvalue 1/2); an orthonormal basis of each off-diagonal
        block is then extracted by Gram-Schmidt over the projected coordinate
        basis.
        """
        if frame is None:
            frame = self.standard_frame()
        self._validate_frame(frame)
        lmats = [self.lmat(c.coords) for c in frame.idempotents]
        eye = np.eye(self.n)
        blocks = {}
        labels = []
        columns = []
        for s, c in enumerate(frame.idempotents):
            proj = 2.0 * lmats[s] @ lmats[s] - lmats[s]
            if np.linalg.norm(proj @ c.coords - c.coords) > 1e-8:
                raise StructuralFailureError(f"V_{s}{s} projector does not fix c_{s}")
            if abs(np.trace(proj) - 1.0) > 1e-6:
                raise StructuralFailureError(f"dim V_{s}{s} != 1")
            blocks[(s, s)] = c.coords[np.newaxis, :]
            labels.append(("diag", s))
            columns.append(c.coords)
        for s in range(self.r):
            half_s = 4.0 * lmats[s] - 4.0 * lmats[s] @ lmats[s]
            for t in range(s + 1, self.r):
                half_t = 4.0 * lmats[t] - 4.0 * lmats[t] @ lmats[t]
                proj = half_s @ half_t
                dim = int(round(float(np.trace(proj))))
                if dim != self.d or abs(np.trace(proj) - dim) > 1e-6:
                    raise StructuralFailureError(
                        f"dim V_{s}{t} = {np.trace(proj):.6f}, expected {self.d}"
                    )
                rows = []
                for v in eye:
                    w = proj @ v
                    for u in rows:
                        w = w - (u @ w) * u
                    for u in rows:  # second pass keeps the basis orthonormal
                        w = w - (u @ w) * u
                    nw = np.linalg.norm(w)
                    if nw > 1e-8:
                        rows.append(w / nw)
                    if len(rows) == dim:
                        break
                if len(rows) != dim:
                    raise StructuralFailureError(f"could not span V_{s}{t}")
                block = np.array(rows)
                blocks[(s, t)] = block
                for m in range(dim):
                    labels.append(("off", s, t, m))
                    columns.append(block[m])
        matrix = np.array(columns).T
        if np.abs(matrix.T @ matrix - eye).max() > 1e-8:
            raise StructuralFailureError("Peirce basis is not orthonormal")
        matrix.setflags(write=False)
        return PeirceBasis(self, frame, blocks, tuple(labels), matrix)

    # ---- natural representations -----------------------------------------

    def from_natural(self, value) -> Element:
        """Build an element from its natural representation.

        sym: real symmetric (r, r); herm: complex Hermitian (r, r);
        quat/albert: (r, r, deg) Hermitian entry array; spin: (x0, vec).
        """
        if self.kind is AlgebraKind.SPIN_FACTOR:
            x0, vec = value
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (self.ambient_dim,):
                raise AlgebraMismatchError(
                    f"spin vector must have dim {self.ambient_dim}, got {vec.shape}"
                )
            return Element(self, np.concatenate([[SQRT2 * float(x0)], SQRT2 * vec]))
        arr = self._entry_array(value)
        coords = np.tensordot(self.entry_basis, arr, axes=3)
        return Element(self, coords)

    def to_natural(self, x: Element):
        self._require_mine(x)
        if self.kind is AlgebraKind.SPIN_FACTOR:
            return float(x.coords[0] / SQRT2), x.coords[1:] / SQRT2
        arr = np.tensordot(x.coords, self.entry_basis, axes=1)
        if self.kind is AlgebraKind.SYM_REAL:
            return arr[..., 0]
        if self.kind is AlgebraKind.HERM_COMPLEX:
            return arr[..., 0] + 1j * arr[..., 1]
        return arr

    def _entry_array(self, value) -> np.ndarray:
        deg = self.kind.entry_degree
        arr = np.asarray(value)
        if self.kind is AlgebraKind.SYM_REAL:
            arr = arr.astype(float).reshape(self.r, self.r, 1)
        elif self.kind is AlgebraKind.HERM_COMPLEX:
            if arr.shape == (self.r, self.r):
                arr = np.stack([arr.real.astype(float), arr.imag.astype(float)], axis=-1)
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (self.r, self.r, deg):
            raise AlgebraMismatchError(
                f"natural form must have shape {(self.r, self.r, deg)}, got {arr.shape}"
            )
        return arr

    def coords_from_entry_arrays(self, batch: np.ndarray) -> np.ndarray:
        """Vectorized natural -> coordinates for a (count, r, r, deg) batch."""
        flat = self.entry_basis.reshape(self.n, -1)
        return batch.reshape(batch.shape[0], -1) @ flat.T

    # ---- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "rank": self.r,
            "peirce_d": self.d,
            "dim": self.n,
            "ambient_dim": self.ambient_dim,
            "product_tensor": self.product_tensor.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)


def _matrix_kind_basis(r: int, deg: int):
    basis = []
    labels = []
    for s in range(r):
        b = np.zeros((r, r, deg))
        b[s, s, 0] = 1.0
        basis.append(b)
        labels.append(("diag", s))
    for s in range(r):
        for t in range(s + 1, r):
            for m in range(deg):
                b = np.zeros((r, r, deg))
                b[s, t, m] = 1.0 / SQRT2
                b[t, s, m] = (1.0 if m == 0 else -1.0) / SQRT2
                basis.append(b)
                labels.append(("off", s, t, m))
    return np.array(basis), tuple(labels)


def _matrix_product_tensor(basis: np.ndarray, deg: int) -> np.ndarray:
    table = mult_table(deg)
    xy = np.einsum("Iajd,Jjbe,dec->IJabc", basis, basis, table)
    sym = 0.5 * (xy + xy.transpose(1, 0, 2, 3, 4))
    return np.einsum("IJabc,Kabc->IJK", sym, basis)


def _spin_product_tensor(ambient_dim: int) -> np.ndarray:
    n = ambient_dim + 1
    tensor = np.zeros((n, n, n))
    s = 1.0 / SQRT2
    tensor[0, 0, 0] = s
    for i in range(1, n):
        tensor[i, i, 0] = s
        tensor[0, i, i] = s
        tensor[i, 0, i] = s
    return tensor


@lru_cache(maxsize=None)
def _make_algebra_cached(kind: AlgebraKind, r: int, ambient_dim: Optional[int]) -> JordanAlgebra:
    if kind is AlgebraKind.SPIN_FACTOR:
        tensor = _spin_product_tensor(ambient_dim)
        n = ambient_dim + 1
        labels = (("scalar",),) + tuple(("vector", i) for i in range(ambient_dim))
        alg = JordanAlgebra(
            kind=kind,
            r=2,
            d=ambient_dim - 1,
            n=n,
            product_tensor=tensor,
            ambient_dim=ambient_dim,
            basis_labels=labels,
        )
    else:
        deg = kind.entry_degree
        basis, labels = _matrix_kind_basis(r, deg)
        tensor = _matrix_product_tensor(basis, deg)
        n = basis.shape[0]
        basis.setflags(write=False)
        alg = JordanAlgebra(
            kind=kind,
            r=r,
            d=deg,
            n=n,
            product_tensor=tensor,
            entry_basis=basis,
            basis_labels=labels,
        )
    alg.product_tensor.setflags(write=False)
    return alg


def make_algebra(kind, r: Optional[int] = None, spin_ambient_dim: Optional[int] = None) -> JordanAlgebra:
    """Construct (and cache) a simple Euclidean Jordan algebra.

    ``r`` defaults to 2 for the spin kind and 3 for the Albert algebra.
    ``spin_ambient_dim`` is dim E for the spin kind and must be >= 2; it is
    rejected for every other kind.
    """
    kind = AlgebraKind.parse(kind)
    if kind is AlgebraKind.SPIN_FACTOR:
        if r is None:
            r = 2
        if r != 2:
            raise AlgebraError("spin factors have rank 2")
        if spin_ambient_dim is None:
            raise AlgebraError("spin factors require spin_ambient_dim (= dim E)")
        if spin_ambient_dim < 2:
            raise AlgebraError("spin ambient dimension must be >= 2")
        return _make_algebra_cached(kind, 2, int(spin_ambient_dim))
    if spin_ambient_dim is not None:
        raise AlgebraError("spin_ambient_dim is only valid for the spin kind")
    if kind is AlgebraKind.ALBERT:
        if r is None:
            r = 3
        if r != 3:
            raise AlgebraError("the Albert algebra has rank 3")
    if r is None:
        raise AlgebraError(f"rank is required for kind {kind.value!r}")
    if r < 1:
        raise AlgebraError("rank must be a positive integer")
    return _make_algebra_cached(kind, int(r), None)
