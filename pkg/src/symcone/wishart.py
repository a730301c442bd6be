"""Wishart distributions on the symmetric cone of a Jordan algebra.

The distribution with shape p and scale sigma in the open cone is defined
through its Laplace transform

    E exp(-tr(theta o X)) = det(e + P(sigma^(1/2)) theta)^(-p),

where P(sigma^(1/2)) is computed as the positive-definite square root of
the operator P(sigma) (the two agree because P(y^2) = P(y)^2).  The shape
parameter must lie in the admissible set

    {d/2, d, 3d/2, ..., (d/2)(r-1)}  union  ((d/2)(r-1), infinity),

otherwise no positive measure has that transform.

Two sampling constructions cover the real symmetric and complex Hermitian
kinds with scale e, and every other scale by the transport X = P(s^1/2) X0:

* discrete shapes p = k d/2 with k <= r-1: a sum of k squared Gaussian
  rank-one terms (real N(0, I/2) columns, or circular complex N(0, I));
* continuous shapes p > (r-1) d/2: a triangular (Bartlett-type) factor
  L L^T with L_ii^2 ~ Gamma(p - (i-1) d/2, 1) and subdiagonal entries with
  variance 1/2 per real component.

Sampling is deterministic given the seed: sample j belongs to chunk
j // CHUNK and each chunk draws from its own generator seeded by
SeedSequence(seed, spawn_key=(stream, chunk)), so results are identical
for any worker count or chunk batching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraKind, Element, JordanAlgebra, SymEndo
from .errors import DomainError, UnsupportedSamplerError

CHUNK = 1 << 15
SAMPLER_KINDS = (AlgebraKind.SYM_REAL, AlgebraKind.HERM_COMPLEX)
STREAM_LAYOUT = {"scheme": "seedseq-spawn(stream,chunk)", "chunk": CHUNK}


@dataclass(frozen=True)
class GyndikinSet:
    """Admissible shape parameters for a given Peirce constant and rank."""

    d: int
    r: int

    @property
    def continuous_threshold(self) -> float:
        return 0.5 * self.d * (self.r - 1)

    def discrete_points(self):
        return [0.5 * self.d * k for k in range(1, self.r)]

    def contains(self, p: float, tol: float = 1e-12) -> bool:
        if p > self.continuous_threshold:
            return True
        return any(abs(p - q) <= tol for q in self.discrete_points())


def gyndikin_contains(gset: GyndikinSet, p: float) -> bool:
    return gset.contains(p)


def cone_sqrt_operator(algebra: JordanAlgebra, sigma: Element) -> np.ndarray:
    """P(sigma^(1/2)) as the PD square root of the operator P(sigma)."""
    algebra._require_mine(sigma)
    if not algebra.in_cone(sigma):
        raise DomainError("sigma is not in the open cone")
    w, v = np.linalg.eigh(algebra.pmat(sigma.coords))
    if w[0] <= 0:
        raise DomainError("P(sigma) is not positive definite")
    return (v * np.sqrt(w)) @ v.T


@dataclass(frozen=True, eq=False)
class WishartParams:
    """Shape p and scale sigma of a Wishart distribution on the cone."""

    algebra: JordanAlgebra
    p: float
    sigma: Element

    def __post_init__(self):
        self.algebra._require_mine(self.sigma)
        if not self.gyndikin().contains(self.p):
            raise DomainError(
                f"shape p={self.p} is not admissible for "
                f"{self.algebra.key_str()}: needs p in "
                f"{self.gyndikin().discrete_points()} or p > "
                f"{self.gyndikin().continuous_threshold}"
            )
        if not self.algebra.in_cone(self.sigma):
            raise DomainError("sigma must lie in the open cone")

    def gyndikin(self) -> GyndikinSet:
        return GyndikinSet(self.algebra.d, self.algebra.r)

    def scale_sqrt_operator(self) -> np.ndarray:
        cached = getattr(self, "_sqrt_op", None)
        if cached is None:
            cached = cone_sqrt_operator(self.algebra, self.sigma)
            cached.setflags(write=False)
            object.__setattr__(self, "_sqrt_op", cached)
        return cached

    @property
    def mean(self) -> Element:
        return self.p * self.sigma


def laplace(params: WishartParams, theta: Element) -> float:
    """det(e + P(sigma^(1/2)) theta)^(-p); theta need not be in the cone as
    long as the argument of det stays positive definite."""
    algebra = params.algebra
    algebra._require_mine(theta)
    z = algebra.identity.coords + params.scale_sqrt_operator() @ theta.coords
    if algebra.min_cone_eigenvalue(z) <= 0:
        raise DomainError("e + P(sigma^1/2) theta is not in the open cone")
    return algebra.determinant_coords(z) ** (-params.p)


class CumulantEvaluator:
    """Cumulant function kappa(theta) = log E exp(<theta, X>) of a Wishart
    variable, with derivatives by central finite differences.

    kappa(theta) = -p log det(e - P(sigma^(1/2)) theta), defined while the
    determinant argument stays in the open cone.  kappa(0) = 0, the gradient
    at 0 is the mean p sigma, and the Hessian is symmetric positive definite
    on the whole domain.
    """

    def __init__(self, params: WishartParams, step: float = 1e-5):
        self.params = params
        self.algebra = params.algebra
        self.step = step
        self._w = params.scale_sqrt_operator()

    @property
    def domain_radius(self) -> float:
        """A norm bound guaranteeing domain membership: |theta| below this
        keeps every spectral eigenvalue of P(sigma^1/2) theta under 1."""
        return 0.9 / float(np.linalg.norm(self._w, 2))

    def _value_coords(self, theta: np.ndarray) -> float:
        z = self.algebra.identity.coords - self._w @ theta
        if self.algebra.min_cone_eigenvalue(z) <= 0:
            raise DomainError("theta outside the cumulant domain")
        return -self.params.p * math.log(self.algebra.determinant_coords(z))

    def value(self, theta: Element) -> float:
        self.algebra._require_mine(theta)
        return self._value_coords(theta.coords)

    def gradient(self, theta: Element) -> Element:
        self.algebra._require_mine(theta)
        t = theta.coords
        n = self.algebra.n
        out = np.zeros(n)
        for i in range(n):
            h = self.step * (1.0 + abs(t[i]))
            dv = np.zeros(n)
            dv[i] = h
            out[i] = (self._value_coords(t + dv) - self._value_coords(t - dv)) / (2.0 * h)
        return Element(self.algebra, out)

    def hessian(self, theta: Element) -> SymEndo:
        self.algebra._require_mine(theta)
        mat = self._hessian_mat(theta.coords, self.step)
        # the 4-point stencil is symmetric by construction; refine with one
        # Richardson step in the unexpected case it is not
        if np.abs(mat - mat.T).max() > 1e-6 * (1.0 + np.abs(mat).max()):
            half = self._hessian_mat(theta.coords, self.step / 2.0)
            mat = (4.0 * half - mat) / 3.0
        return SymEndo(self.algebra, 0.5 * (mat + mat.T))

    def _hessian_mat(self, t: np.ndarray, step: float) -> np.ndarray:
        n = self.algebra.n
        steps = step * (1.0 + np.abs(t))
        mat = np.zeros((n, n))
        base = self._value_coords(t)
        for i in range(n):
            hi = steps[i]
            di = np.zeros(n)
            di[i] = hi
            mat[i, i] = (self._value_coords(t + di) - 2.0 * base + self._value_coords(t - di)) / hi**2
            for j in range(i + 1, n):
                hj = steps[j]
                dj = np.zeros(n)
                dj[j] = hj
                val = (
                    self._value_coords(t + di + dj)
                    - self._value_coords(t + di - dj)
                    - self._value_coords(t - di + dj)
                    + self._value_coords(t - di - dj)
                ) / (4.0 * hi * hj)
                mat[i, j] = mat[j, i] = val
        return mat


def cumulant(params: WishartParams, theta: Element) -> float:
    return CumulantEvaluator(params).value(theta)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _chunk_rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(stream, chunk))
    return np.random.default_rng(ss)


def _sampling_plan(params: WishartParams):
    gset = params.gyndikin()
    d, r, p = params.algebra.d, params.algebra.r, params.p
    k = int(round(2.0 * p / d))
    if 1 <= k <= r - 1 and abs(p - 0.5 * d * k) <= 1e-9:
        return ("rank_one", k)
    if p > gset.continuous_threshold:
        return ("bartlett", None)
    raise UnsupportedSamplerError(
        f"no sampler for shape p={p} on {params.algebra.key_str()}"
    )


def _standard_chunk(algebra: JordanAlgebra, plan, p: float, rng, m: int) -> np.ndarray:
    """One chunk of scale-e samples as (m, r, r, deg) Hermitian entry arrays."""
    r = algebra.r
    complex_entries = algebra.kind is AlgebraKind.HERM_COMPLEX
    kind_dp = algebra.d / 2.0
    if plan[0] == "rank_one":
        k = plan[1]
        if complex_entries:
            z = rng.normal(0.0, np.sqrt(0.5), size=(2, m, k, r))
            zc = z[0] + 1j * z[1]
            mats = np.einsum("nka,nkb->nab", zc, zc.conj())
        else:
            z = rng.normal(0.0, np.sqrt(0.5), size=(m, k, r))
            mats = np.einsum("nka,nkb->nab", z, z)
    else:
        shapes = [p - i * kind_dp for i in range(r)]
        gam = np.stack([rng.gamma(shape, 1.0, size=m) for shape in shapes], axis=1)
        if complex_entries:
            low = np.zeros((m, r, r), dtype=complex)
            for i in range(r):
                for j in range(i):
                    low[:, i, j] = rng.normal(0.0, np.sqrt(0.5), size=m) + 1j * rng.normal(
                        0.0, np.sqrt(0.5), size=m
                    )
            low[:, np.arange(r), np.arange(r)] = np.sqrt(gam)
            mats = np.einsum("nik,njk->nij", low, low.conj())
        else:
            low = np.zeros((m, r, r))
            for i in range(r):
                for j in range(i):
                    low[:, i, j] = rng.normal(0.0, np.sqrt(0.5), size=m)
            low[:, np.arange(r), np.arange(r)] = np.sqrt(gam)
            mats = np.einsum("nik,njk->nij", low, low)
    if complex_entries:
        return np.stack([mats.real, mats.imag], axis=-1)
    return mats[..., np.newaxis]


def sample_coords(
    params: WishartParams, count: int, seed: int, stream: int = 0
) -> np.ndarray:
    """Draw ``count`` samples as a (count, n) array of coordinates."""
    algebra = params.algebra
    if algebra.kind not in SAMPLER_KINDS:
        raise UnsupportedSamplerError(
            f"sampling is implemented for kinds "
            f"{[k.value for k in SAMPLER_KINDS]}, not {algebra.kind.value!r}"
        )
    if count <= 0:
        raise ValueError("count must be positive")
    plan = _sampling_plan(params)
    w = params.scale_sqrt_operator()
    out = np.empty((count, algebra.n))
    pos = 0
    chunk_index = 0
    while pos < count:
        m = min(CHUNK, count - pos)
        rng = _chunk_rng(seed, stream, chunk_index)
        mats = _standard_chunk(algebra, plan, params.p, rng, m)
        out[pos : pos + m] = algebra.coords_from_entry_arrays(mats) @ w.T
        pos += m
        chunk_index += 1
    return out


def sample(params: WishartParams, count: int, seed: int):
    """Draw samples as a list of Elements (thin wrapper over sample_coords)."""
    coords = sample_coords(params, count, seed)
    return [Element(params.algebra, row) for row in coords]


# ---------------------------------------------------------------------------
# empirical Laplace validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaplaceCheckRow:
    theta_label: str
    empirical: float
    exact: float
    std_error: float
    z_score: float

    def to_dict(self) -> dict:
        return {
            "theta": self.theta_label,
            "empirical": self.empirical,
            "exact": self.exact,
            "std_error": self.std_error,
            "z_score": self.z_score,
        }


@dataclass
class LaplaceReport:
    algebra: str
    p: float
    sigma: list
    n_samples: int
    seed: int
    z_threshold: float
    rows: list = field(default_factory=list)
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "p": self.p,
            "sigma": self.sigma,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "z_threshold": self.z_threshold,
            "streams": dict(STREAM_LAYOUT),
            "laplace_grid": [row.to_dict() for row in self.rows],
            "pass": self.passed,
        }


def laplace_check(
    params: WishartParams,
    n_samples: int,
    seed: int,
    theta_scales: Sequence[float] = (0.05, 0.10, 0.15, 0.20, 0.25),
    z_threshold: float = 3.0,
    coords: Optional[np.ndarray] = None,
) -> LaplaceReport:
    """Compare the empirical Laplace transform against the closed form on a
    grid theta = t e; each point must land within ``z_threshold`` standard
    errors."""
    algebra = params.algebra
    if coords is None:
        coords = sample_coords(params, n_samples, seed)
    report = LaplaceReport(
        algebra=algebra.key_str(),
        p=params.p,
        sigma=[float(v) for v in params.sigma.coords],
        n_samples=int(coords.shape[0]),
        seed=seed,
        z_threshold=z_threshold,
    )
    e = algebra.identity
    for t in theta_scales:
        theta = float(t) * e
        weights = np.exp(-coords @ theta.coords)
        emp = float(weights.mean())
        se = float(weights.std(ddof=1) / np.sqrt(len(weights)))
        exact = laplace(params, theta)
        z = (emp - exact) / se if se > 0 else 0.0
        report.rows.append(
            LaplaceCheckRow(f"{t:g}*e", emp, exact, se, float(z))
        )
        if abs(z) > z_threshold:
            report.passed = False
    return report
