"""Calculus on the space of symmetric endomorphisms of a Jordan algebra.

With V identified with its dual through <x, y> = tr(x o y), a quadratic
form q on V and a symmetric endomorphism f determine each other via
q(x) = <f(x), x>.  On this space acts the split operator: the symmetric
operator on endomorphisms that sends every rank-one form y (x) y to the
quadratic representation P(y).  Its spectrum is exactly {1, -d/2}, and the
two eigenspaces give the canonical orthogonal decomposition of quadratic
forms whose components behave differently under conditional expectations
of Wishart pairs.  The eigenvalue-1 component is spanned by the forms
(d/2) tr(xs)^2 + <P(s)x, x> and the other by tr(xs)^2 - <P(s)x, x>.

The operator acts on an orthonormal basis of endomorphisms built from a
Peirce-adapted element basis (u_l): the elements u_i (x) u_i together with
(u_i (x) u_j + u_j (x) u_i)/sqrt(2).  In that basis the dense matrix is
assembled column by column from

    u (x) u                 ->  P(u)
    u (x) v + v (x) u       ->  P(u + v) - P(u) - P(v)
                             =  2 [L(u) L(v) + L(v) L(u) - L(u o v)].

Dimensions stay desk scale: the largest case (Albert) gives a 378 x 378
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import Element, JordanAlgebra, PeirceBasis, SymEndo, _require_same_algebra
from .errors import AlgebraError, StructuralFailureError

SQRT2 = float(np.sqrt(2.0))

# Expected diagonal entries Tr[Psi(f_l) f_l] per basis-element case.  A* are
# single Peirce basis elements, B* are pairs, classified by how their blocks
# overlap (see case_table).
CASE_VALUES = {
    "A1": 1.0,
    "A2": 0.5,
    "B1": 0.0,
    "B2": 1.0,
    "B3": 0.0,
    "B4": 1.0,
    "B5": 0.5,
    "B6": 0.0,
}


def expected_case_counts(r: int, d: int) -> dict:
    """Number of orthonormal basis endomorphisms falling in each case."""
    dp = d / 2.0
    pair_blocks = r * (r - 1) // 2
    return {
        "A1": r,
        "A2": int(round(r * (r - 1) * dp)),
        "B1": pair_blocks,
        "B2": int(round(2 * r * (r - 1) * dp)),
        "B3": pair_blocks * d * (r - 2),
        "B4": int(round(r * (r - 1) * dp * (dp - 0.5))),
        "B5": int(round(2 * r * (r - 1) * (r - 2) * dp * dp)),
        "B6": (pair_blocks * ((r - 2) * (r - 3) // 2) // 2) * d * d,
    }


# ---------------------------------------------------------------------------
# outer products and the form/endomorphism isomorphism
# ---------------------------------------------------------------------------


def outer(a: Element, b: Element) -> np.ndarray:
    """Raw outer product: the (generally non-symmetric) map x -> a tr(b o x).

    In orthonormal coordinates this is the rank-one matrix a b^T."""
    _require_same_algebra(a, b)
    return np.outer(a.coords, b.coords)


def outer_sym(a: Element, b: Element) -> SymEndo:
    """a (x) b + b (x) a, the symmetrized outer product."""
    _require_same_algebra(a, b)
    return SymEndo(a.algebra, np.outer(a.coords, b.coords) + np.outer(b.coords, a.coords))


def q_of_endo(f: SymEndo, x: Element) -> float:
    """Evaluate the quadratic form of a symmetric endomorphism: <f(x), x>."""
    _require_same_algebra(f, x)
    return float(x.coords @ f.mat @ x.coords)


def endo_of_q(algebra: JordanAlgebra, q: Callable[[Element], float]) -> SymEndo:
    """Recover f from a quadratic form by polarization:
    <f(e_i), e_j> = (q(e_i + e_j) - q(e_i) - q(e_j)) / 2."""
    n = algebra.n
    diag = np.array([q(algebra.basis_element(i)) for i in range(n)])
    mat = np.zeros((n, n))
    for i in range(n):
        mat[i, i] = diag[i]
        for j in range(i + 1, n):
            ei = np.zeros(n)
            ei[i] = 1.0
            ei[j] = 1.0
            mat[i, j] = mat[j, i] = 0.5 * (q(algebra.element(ei)) - diag[i] - diag[j])
    return SymEndo(algebra, mat)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Quadratic form represented by its symmetric endomorphism."""

    endo: SymEndo

    @property
    def algebra(self) -> JordanAlgebra:
        return self.endo.algebra

    def __call__(self, x: Element) -> float:
        return q_of_endo(self.endo, x)

    def batch(self, coords: np.ndarray) -> np.ndarray:
        """Evaluate on a (count, n) array of coordinate rows."""
        return np.einsum("ni,ij,nj->n", coords, self.endo.mat, coords)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.endo + other.endo)

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.endo - other.endo)

    def __mul__(self, scalar) -> "QuadraticForm":
        return QuadraticForm(self.endo * scalar)

    __rmul__ = __mul__


def spanning_form(s: Element, component: int) -> QuadraticForm:
    """Canonical quadratic form attached to s spanning one split component.

    component 1:  (d/2) tr(x o s)^2 + <P(x)s, s>   with endo (d/2) s s^T + P(s)
    component 2:        tr(x o s)^2 - <P(x)s, s>   with endo       s s^T - P(s)

    The P(s) representation uses <P(x)s, s> = <P(s)x, x>.
    """
    algebra = s.algebra
    ss = np.outer(s.coords, s.coords)
    ps = algebra.pmat(s.coords)
    if component == 1:
        return QuadraticForm(SymEndo(algebra, (algebra.d / 2.0) * ss + ps))
    if component == 2:
        return QuadraticForm(SymEndo(algebra, ss - ps))
    raise ValueError("component must be 1 or 2")


# ---------------------------------------------------------------------------
# the split operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitOperator:
    """Dense matrix of the split operator over an orthonormal endomorphism
    basis built from a Peirce-adapted element basis."""

    algebra: JordanAlgebra
    mat: np.ndarray
    element_basis: PeirceBasis
    pairs: tuple

    @property
    def space_dim(self) -> int:
        return self.mat.shape[0]

    def to_f_coords(self, f: SymEndo) -> np.ndarray:
        return self.to_f_coords_raw(f.mat)

    def to_f_coords_raw(self, mat: np.ndarray) -> np.ndarray:
        u = self.element_basis.matrix
        return _svec(u.T @ mat @ u, self.algebra.n)

    def from_f_coords(self, vec: np.ndarray) -> SymEndo:
        u = self.element_basis.matrix
        return SymEndo(self.algebra, u @ _unsvec(vec, self.algebra.n) @ u.T)

    def apply(self, f: SymEndo) -> SymEndo:
        return self.from_f_coords(self.mat @ self.to_f_coords(f))

    def operator_trace(self) -> float:
        return float(np.trace(self.mat))


def _svec(sym: np.ndarray, n: int) -> np.ndarray:
    iu, ju = np.triu_indices(n, k=1)
    return np.concatenate([np.diag(sym), SQRT2 * sym[iu, ju]])


def _unsvec(vec: np.ndarray, n: int) -> np.ndarray:
    iu, ju = np.triu_indices(n, k=1)
    out = np.diag(vec[:n]).astype(float)
    out[iu, ju] = vec[n:] / SQRT2
    out[ju, iu] = vec[n:] / SQRT2
    return out


def build_split_operator(algebra: JordanAlgebra, basis: Optional[PeirceBasis] = None) -> SplitOperator:
    """Assemble the operator matrix; O(N n^2) with N = n(n+1)/2."""
    if basis is None:
        basis = algebra.peirce_basis()
    n = algebra.n
    u = basis.matrix
    # multiplication operators of the Peirce basis elements, in that basis
    lres = np.array([u.T @ algebra.lmat(u[:, i]) @ u for i in range(n)])
    uprod = np.array(
        [[u.T @ algebra.product_coords(u[:, i], u[:, j]) for j in range(n)] for i in range(n)]
    )
    pairs = [(i, i) for i in range(n)] + [
        (i, j) for i in range(n) for j in range(i + 1, n)
    ]
    N = len(pairs)
    mat = np.zeros((N, N))
    for col, (i, j) in enumerate(pairs):
        li, lj = lres[i], lres[j]
        luv = np.einsum("k,kab->ab", uprod[i, j], lres)
        if i == j:
            image = 2.0 * li @ li - luv
        else:
            image = 2.0 * (li @ lj + lj @ li - luv) / SQRT2
        mat[:, col] = _svec(image, n)
    scale = 1.0 + np.abs(mat).max()
    if np.abs(mat - mat.T).max() > 1e-10 * scale:
        raise StructuralFailureError("split operator is not symmetric")
    mat = 0.5 * (mat + mat.T)
    mat.setflags(write=False)
    return SplitOperator(algebra, mat, basis, tuple(pairs))


def split_trace_closed(r: int, d: int) -> float:
    """Closed form of the operator trace: r + r(r-1)(d/2)[2 + (r-1)d/2]."""
    dp = d / 2.0
    return r + r * (r - 1) * dp * (2.0 + (r - 1) * dp)


def dims_closed_form(r: int, d: int):
    """Closed-form dimensions (dim1, dim2) of the two eigencomponents.

    dim2 = r(r-1)/2 * [1 + d'(2r-3) + d'^2 (r-1)(r-2)] / (1 + d'), d' = d/2,
    and dim1 + dim2 = n(n+1)/2.  Both must come out integral."""
    if r < 1 or d < 1:
        raise AlgebraError("rank and Peirce constant must be positive")
    dp = d / 2.0
    n = r + d * r * (r - 1) // 2
    total = n * (n + 1) // 2
    dim2 = (r * (r - 1) / 2.0) * (1.0 + dp * (2 * r - 3) + dp * dp * (r - 1) * (r - 2)) / (1.0 + dp)
    if abs(dim2 - round(dim2)) > 1e-9:
        raise AlgebraError(f"(r={r}, d={d}) gives non-integer component dimension {dim2}")
    dim2 = int(round(dim2))
    return total - dim2, dim2


@dataclass(frozen=True, eq=False)
class SpectralSplit:
    """Orthogonal projectors onto the two eigencomponents of the split
    operator (eigenvalues 1 and -d/2)."""

    operator: SplitOperator
    proj1: np.ndarray
    proj2: np.ndarray
    dim1: int
    dim2: int

    def project(self, f: SymEndo, component: int) -> SymEndo:
        proj = self.proj1 if component == 1 else self.proj2
        return self.operator.from_f_coords(proj @ self.operator.to_f_coords(f))

    def residual(self, f: SymEndo, component: int) -> float:
        """Norm of the projection onto the *other* component, relative to
        the norm of f; zero iff f lies in the given component."""
        vec = self.operator.to_f_coords(f)
        proj = self.proj2 if component == 1 else self.proj1
        denom = 1.0 + float(np.linalg.norm(vec))
        return float(np.linalg.norm(proj @ vec)) / denom


def spectral_split(op: SplitOperator, tol: float = 1e-9) -> SpectralSplit:
    """Projectors from the resolvent closed forms, cross-checked against the
    numeric eigendecomposition.

    proj1 = (M + d' I)/(1 + d'), proj2 = (I - M)/(1 + d').  An eigenvalue
    farther than ``tol`` from both 1 and -d' means the algebra kernel is
    broken and raises StructuralFailureError.
    """
    algebra = op.algebra
    dp = algebra.d / 2.0
    N = op.space_dim
    eye = np.eye(N)
    evals = np.linalg.eigvalsh(op.mat)
    bad = np.min(np.abs(evals[:, None] - np.array([1.0, -dp])[None, :]), axis=1)
    if bad.max() > tol:
        raise StructuralFailureError(
            f"split operator eigenvalue outside {{1, -{dp}}}: deviation {bad.max():.3e}"
        )
    proj1 = (op.mat + dp * eye) / (1.0 + dp)
    proj2 = (eye - op.mat) / (1.0 + dp)
    for proj in (proj1, proj2):
        if np.abs(proj @ proj - proj).max() > tol:
            raise StructuralFailureError("split projector is not idempotent")
    dims = []
    for proj in (proj1, proj2):
        t = float(np.trace(proj))
        if abs(t - round(t)) > 1e-6:
            raise StructuralFailureError(f"projector trace {t} is not integral")
        dims.append(int(round(t)))
    nev1 = int(np.sum(np.abs(evals - 1.0) <= np.abs(evals + dp)))
    if nev1 != dims[0]:
        raise StructuralFailureError("eigenvalue multiplicities disagree with projector ranks")
    proj1.setflags(write=False)
    proj2.setflags(write=False)
    return SpectralSplit(op, proj1, proj2, dims[0], dims[1])


def decompose_quadratic(split: SpectralSplit, q: QuadraticForm):
    """Split q = q1 + q2 along the two eigencomponents."""
    f1 = split.project(q.endo, 1)
    f2 = split.project(q.endo, 2)
    return QuadraticForm(f1), QuadraticForm(f2)


# ---------------------------------------------------------------------------
# case table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseStats:
    count: int
    expected_count: int
    mean_value: float
    expected_value: float
    max_abs_dev: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "expected_count": self.expected_count,
            "mean_value": self.mean_value,
            "expected_value": self.expected_value,
            "max_abs_dev": self.max_abs_dev,
        }


def _classify_pair(label_i, label_j) -> str:
    if label_i == label_j:
        return "A1" if label_i[0] == "diag" else "A2"
    kinds = sorted([label_i, label_j])
    a, b = kinds
    if a[0] == "diag" and b[0] == "diag":
        return "B1"
    if a[0] == "diag":
        s = a[1]
        return "B2" if s in (b[1], b[2]) else "B3"
    blk_a, blk_b = (a[1], a[2]), (b[1], b[2])
    if blk_a == blk_b:
        return "B4"
    shared = len(set(blk_a) & set(blk_b))
    return "B5" if shared == 1 else "B6"


def case_table(op: SplitOperator) -> dict:
    """Classify every basis endomorphism by its Peirce labels and report the
    diagonal entries Tr[Psi(f_l) f_l] per case, with the expected counts."""
    labels = op.element_basis.labels
    diag = np.diag(op.mat)
    buckets = {name: [] for name in CASE_VALUES}
    for idx, (i, j) in enumerate(op.pairs):
        name = _classify_pair(labels[i], labels[j])
        buckets[name].append(diag[idx])
    expected_counts = expected_case_counts(op.algebra.r, op.algebra.d)
    table = {}
    for name, values in buckets.items():
        arr = np.array(values) if values else np.zeros(0)
        ev = CASE_VALUES[name]
        table[name] = CaseStats(
            count=len(values),
            expected_count=expected_counts[name],
            mean_value=float(arr.mean()) if len(values) else ev,
            expected_value=ev,
            max_abs_dev=float(np.abs(arr - ev).max()) if len(values) else 0.0,
        )
    return table
