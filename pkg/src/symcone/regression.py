"""Conditional-expectation constants of Wishart pairs and their verification.

For independent X ~ shape p and Y ~ shape p' with a common scale, the
conditional expectations given S = X + Y are governed by

    a  = p/(p+p'),
    b1 = a (p+1)/(p+p'+1),          E(q(X)|S) = b1 q(S) for component-1 forms,
    b2 = a (p-d/2)/(p+p'-d/2),      E(q(X)|S) = b2 q(S) for component-2 forms,

with the ordering b2 < a^2 < b1 < a for p, p' > 0, p > d/2.  Conversely
(a, b1, b2) together with n = dim V pin down the algebra: the Peirce
constant is

    d = 2 (a - b1)/(b1 - a^2) * (a^2 - b2)/(a - b2)

and the rank solves n = r + (d/2) r (r-1).

The identities are checked two ways:

* Monte Carlo, in integrated form: multiplying E(.|S) identities by
  exp(-<theta, S>) and taking expectations gives moment equalities that are
  estimated by paired sample means with jackknife standard errors (for the
  mean statistic the delete-one jackknife equals std/sqrt(N)).

* Analytically, through the cumulant kappa of X: every component-i form
  satisfies Tr(f_q kappa''(theta)) = p_i q(kappa'(theta)) with
  p_i = (b_i - a^2)/(a^2 - a b_i), which simplifies to p_1 = 1/p and
  p_2 = -d/(2p).  Derivatives are taken by central finite differences, so
  the comparison tolerance is dominated by the differencing error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraKind, Element, JordanAlgebra
from .errors import DomainError, InconsistentConstantsError
from .quadsplit import QuadraticForm, spanning_form
from .wishart import (
    STREAM_LAYOUT,
    CumulantEvaluator,
    WishartParams,
    sample_coords,
)

Z_THRESHOLD = 4.0
REL_TOL_DIFF = 1e-3


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionConstants:
    p: float
    p_prime: float
    d: int
    a: float
    b1: float
    b2: float

    @property
    def ordering_holds(self) -> bool:
        return self.b2 < self.a**2 < self.b1 < self.a

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "p_prime": self.p_prime,
            "d": self.d,
            "a": self.a,
            "b1": self.b1,
            "b2": self.b2,
        }


def constants_from_shapes(p: float, p_prime: float, d: int) -> RegressionConstants:
    if p <= 0 or p_prime <= 0:
        raise DomainError("shapes p, p' must be positive")
    total = p + p_prime
    if abs(total - d / 2.0) < 1e-12 or abs(total + 1.0) < 1e-12:
        raise DomainError("degenerate shapes: division by zero in the constants")
    a = p / total
    b1 = a * (p + 1.0) / (total + 1.0)
    b2 = a * (p - d / 2.0) / (total - d / 2.0)
    return RegressionConstants(p=p, p_prime=p_prime, d=d, a=a, b1=b1, b2=b2)


@dataclass(frozen=True)
class DifferentialCheck:
    """Proportionality constants of the cumulant differential identity,
    one per split component: p_i = (b_i - a^2)/(a^2 - a b_i)."""

    p1: float
    p2: float

    def constant(self, component: int) -> float:
        return self.p1 if component == 1 else self.p2


def diff_constants(constants: RegressionConstants) -> DifferentialCheck:
    a = constants.a
    values = []
    for b in (constants.b1, constants.b2):
        denom = a * a - a * b
        if abs(denom) < 1e-14:
            raise DomainError("a == b_i: differential constant undefined")
        values.append((b - a * a) / denom)
    return DifferentialCheck(p1=values[0], p2=values[1])


def diff_constants_closed(p: float, d: int) -> DifferentialCheck:
    """Closed forms of the quotient formula for Wishart constants:
    p_1 = 1/p and p_2 = -d/(2p)."""
    return DifferentialCheck(p1=1.0 / p, p2=-d / (2.0 * p))


# ---------------------------------------------------------------------------
# structure recovery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecoveredStructure:
    d_raw: float
    r_raw: float
    d: int
    r: int
    kind_candidates: tuple  # of (AlgebraKind, ambient_dim or None)

    def to_dict(self) -> dict:
        return {
            "peirce_d_raw": self.d_raw,
            "rank_raw": self.r_raw,
            "peirce_d": self.d,
            "rank": self.r,
            "kinds": [
                {"kind": kind.value, "ambient_dim": amb}
                for kind, amb in self.kind_candidates
            ],
        }


INTEGRALITY_TOL = 1e-6


def recover_structure(a: float, b1: float, b2: float, n: int) -> RecoveredStructure:
    """Invert the constants: Peirce constant from (a, b1, b2), rank from the
    dimension formula, then the matching kinds.  Rank-2 structures are
    ambiguous (every rank-2 matrix kind is isomorphic to a spin factor of
    the same dimension), so those return candidate sets."""
    if n < 3:
        raise InconsistentConstantsError("dimension must be at least 3")
    if not (b2 < a * a < b1 < a):
        raise InconsistentConstantsError(
            f"constants violate the ordering b2 < a^2 < b1 < a: "
            f"b2={b2}, a^2={a * a}, b1={b1}, a={a}"
        )
    d_raw = 2.0 * (a - b1) / (b1 - a * a) * (a * a - b2) / (a - b2)
    if abs(d_raw - round(d_raw)) > INTEGRALITY_TOL or round(d_raw) < 1:
        raise InconsistentConstantsError(
            f"recovered Peirce constant {d_raw!r} is not a positive integer"
        )
    d = int(round(d_raw))
    dp = d / 2.0
    # n = r + d' r (r-1)  =>  d' r^2 + (1-d') r - n = 0
    r_raw = ((dp - 1.0) + math.sqrt((1.0 - dp) ** 2 + 4.0 * dp * n)) / (2.0 * dp)
    if abs(r_raw - round(r_raw)) > INTEGRALITY_TOL or round(r_raw) < 2:
        raise InconsistentConstantsError(
            f"recovered rank {r_raw!r} is not an integer >= 2"
        )
    r = int(round(r_raw))
    kinds = []
    if d == 1:
        kinds.append((AlgebraKind.SYM_REAL, None))
    elif d == 2:
        kinds.append((AlgebraKind.HERM_COMPLEX, None))
    elif d == 4:
        kinds.append((AlgebraKind.HERM_QUATERNION, None))
    elif d == 8 and r == 3:
        kinds.append((AlgebraKind.ALBERT, None))
    if r == 2:
        kinds.append((AlgebraKind.SPIN_FACTOR, d + 1))
    if not kinds:
        raise InconsistentConstantsError(
            f"no simple algebra has Peirce constant {d} at rank {r}"
        )
    return RecoveredStructure(d_raw=d_raw, r_raw=r_raw, d=d, r=r, kind_candidates=tuple(kinds))


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationRow:
    label: str
    lhs: float
    rhs: float
    std_error: Optional[float] = None
    z_score: Optional[float] = None
    rel_err: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "test_function": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "std_error": self.std_error,
            "z_score": self.z_score,
            "rel_err": self.rel_err,
        }


@dataclass
class VerificationReport:
    identity: str
    constants: dict
    n_samples: Optional[int]
    seed: Optional[int]
    z_threshold: Optional[float]
    rel_tol: Optional[float]
    rows: list = field(default_factory=list)
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "constants": self.constants,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "z_threshold": self.z_threshold,
            "rel_tol": self.rel_tol,
            "streams": dict(STREAM_LAYOUT) if self.n_samples else None,
            "rows": [row.to_dict() for row in self.rows],
            "pass": self.passed,
        }


def _paired_stats(t1: np.ndarray, t2: np.ndarray):
    """Mean difference with delete-one jackknife standard error (equal to
    std/sqrt(N) for the mean statistic)."""
    diff = t1 - t2
    m = float(diff.mean())
    se = float(diff.std(ddof=1) / np.sqrt(len(diff)))
    if se == 0.0:
        z = 0.0 if m == 0.0 else math.inf
    else:
        z = m / se
    return float(t1.mean()), float(t2.mean()), se, float(z)


def default_theta_grid(
    algebra: JordanAlgebra,
    seed: int,
    scales: Sequence[float] = (0.05, 0.10, 0.15, 0.20, 0.25),
    n_random: int = 3,
    random_norm: float = 0.1,
):
    """Identity-direction scales plus a few random interior directions of
    fixed norm; labels make the grid auditable in reports."""
    grid = [(f"{t:g}*e", float(t) * algebra.identity) for t in scales]
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(7,)))
    for i in range(n_random):
        direction = algebra.random_cone_element(rng, margin=0.1)
        theta = (random_norm / direction.norm()) * direction
        grid.append((f"rand{i}", theta))
    return grid


def default_s_list(algebra: JordanAlgebra, seed: int, n_random: int = 2):
    out = [("e", algebra.identity)]
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(11,)))
    for i in range(n_random):
        out.append((f"rand{i}", algebra.random_element(rng)))
    return out


def _sample_pair(algebra, p, p_prime, sigma, n_samples, seed):
    x = sample_coords(WishartParams(algebra, p, sigma), n_samples, seed, stream=0)
    y = sample_coords(WishartParams(algebra, p_prime, sigma), n_samples, seed, stream=1)
    return x, y


def mc_verify_linear(
    algebra: JordanAlgebra,
    p: float,
    p_prime: float,
    sigma: Element,
    n_samples: int,
    seed: int,
    theta_grid=None,
    a_value: Optional[float] = None,
    z_threshold: float = Z_THRESHOLD,
) -> VerificationReport:
    """Monte Carlo check of the linear conditional mean in integrated form:
    E[<theta, X> w] = a E[<theta, S> w] with w = exp(-<theta, S>)."""
    constants = constants_from_shapes(p, p_prime, algebra.d)
    a = constants.a if a_value is None else float(a_value)
    if theta_grid is None:
        theta_grid = default_theta_grid(algebra, seed)
    x, y = _sample_pair(algebra, p, p_prime, sigma, n_samples, seed)
    s = x + y
    report = VerificationReport(
        identity="linear-conditional-mean",
        constants={"a": a, **constants.to_dict()},
        n_samples=n_samples,
        seed=seed,
        z_threshold=z_threshold,
        rel_tol=None,
    )
    for label, theta in theta_grid:
        tc = theta.coords
        w = np.exp(-(s @ tc))
        lhs, rhs, se, z = _paired_stats((x @ tc) * w, a * (s @ tc) * w)
        report.rows.append(VerificationRow(label, lhs, rhs, std_error=se, z_score=z))
        if abs(z) > z_threshold:
            report.passed = False
    return report


def mc_verify_quadratic(
    algebra: JordanAlgebra,
    p: float,
    p_prime: float,
    sigma: Element,
    component: int,
    n_samples: int,
    seed: int,
    s_list=None,
    theta_grid=None,
    b_value: Optional[float] = None,
    z_threshold: float = Z_THRESHOLD,
) -> VerificationReport:
    """Monte Carlo check of the quadratic conditional mean for the spanning
    forms of one split component: E[q(X) w] = b_i E[q(S) w]."""
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    constants = constants_from_shapes(p, p_prime, algebra.d)
    b = (constants.b1 if component == 1 else constants.b2) if b_value is None else float(b_value)
    if theta_grid is None:
        theta_grid = default_theta_grid(algebra, seed)
    if s_list is None:
        s_list = default_s_list(algebra, seed)
    x, y = _sample_pair(algebra, p, p_prime, sigma, n_samples, seed)
    s = x + y
    report = VerificationReport(
        identity=f"quadratic-conditional-mean-{component}",
        constants={"b": b, "component": component, **constants.to_dict()},
        n_samples=n_samples,
        seed=seed,
        z_threshold=z_threshold,
        rel_tol=None,
    )
    for s_label, s_elem in s_list:
        form = spanning_form(s_elem, component)
        qx = form.batch(x)
        qs = form.batch(s)
        for label, theta in theta_grid:
            w = np.exp(-(s @ theta.coords))
            lhs, rhs, se, z = _paired_stats(qx * w, b * qs * w)
            report.rows.append(
                VerificationRow(f"s={s_label},theta={label}", lhs, rhs, std_error=se, z_score=z)
            )
            if abs(z) > z_threshold:
                report.passed = False
    return report


def mc_verify_mixed(
    algebra: JordanAlgebra,
    p: float,
    p_prime: float,
    sigma: Element,
    q: QuadraticForm,
    q1: QuadraticForm,
    q2: QuadraticForm,
    n_samples: int,
    seed: int,
    theta_grid=None,
    z_threshold: float = Z_THRESHOLD,
) -> VerificationReport:
    """Check E[q(X) w] = E[(b1 q1 + b2 q2)(S) w] for q = q1 + q2 split along
    the two components (the mechanism behind the mixed-form regression)."""
    constants = constants_from_shapes(p, p_prime, algebra.d)
    if theta_grid is None:
        theta_grid = default_theta_grid(algebra, seed)
    x, y = _sample_pair(algebra, p, p_prime, sigma, n_samples, seed)
    s = x + y
    report = VerificationReport(
        identity="mixed-form-conditional-mean",
        constants=constants.to_dict(),
        n_samples=n_samples,
        seed=seed,
        z_threshold=z_threshold,
        rel_tol=None,
    )
    qx = q.batch(x)
    target = constants.b1 * q1.batch(s) + constants.b2 * q2.batch(s)
    for label, theta in theta_grid:
        w = np.exp(-(s @ theta.coords))
        lhs, rhs, se, z = _paired_stats(qx * w, target * w)
        report.rows.append(VerificationRow(label, lhs, rhs, std_error=se, z_score=z))
        if abs(z) > z_threshold:
            report.passed = False
    return report


# ---------------------------------------------------------------------------
# differential identity
# ---------------------------------------------------------------------------


def verify_diff_identity(
    algebra: JordanAlgebra,
    p: float,
    p_prime: float,
    sigma: Element,
    component: int,
    s: Element,
    theta: Element,
    step: float = 1e-5,
):
    """Single-point check of Tr(f_q kappa''(theta)) = p_i q(kappa'(theta))
    for q the component-i spanning form of s.  Returns (lhs, rhs, rel_err)."""
    constants = constants_from_shapes(p, p_prime, algebra.d)
    pi = diff_constants(constants).constant(component)
    form = spanning_form(s, component)
    evaluator = CumulantEvaluator(WishartParams(algebra, p, sigma), step=step)
    hess = evaluator.hessian(theta)
    grad = evaluator.gradient(theta)
    lhs = float(np.trace(form.endo.mat @ hess.mat))
    rhs = pi * form(grad)
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
    return lhs, rhs, rel


def diff_identity_report(
    algebra: JordanAlgebra,
    p: float,
    p_prime: float,
    sigma: Element,
    n_checks: int = 10,
    seed: int = 0,
    rel_tol: float = REL_TOL_DIFF,
) -> VerificationReport:
    """Both components at ``n_checks`` random (s, theta) pairs; theta is kept
    inside the cumulant domain by scaling against the domain radius."""
    constants = constants_from_shapes(p, p_prime, algebra.d)
    diff = diff_constants(constants)
    report = VerificationReport(
        identity="cumulant-differential",
        constants={"p1": diff.p1, "p2": diff.p2, **constants.to_dict()},
        n_samples=None,
        seed=seed,
        z_threshold=None,
        rel_tol=rel_tol,
    )
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(13,)))
    evaluator = CumulantEvaluator(WishartParams(algebra, p, sigma))
    radius = evaluator.domain_radius
    for i in range(n_checks):
        s = algebra.random_element(rng)
        direction = algebra.random_cone_element(rng, margin=0.1)
        theta = (0.5 * radius * rng.uniform(0.2, 1.0) / direction.norm()) * direction
        for component in (1, 2):
            lhs, rhs, rel = verify_diff_identity(
                algebra, p, p_prime, sigma, component, s, theta
            )
            report.rows.append(
                VerificationRow(f"check{i},component{component}", lhs, rhs, rel_err=rel)
            )
            if rel > rel_tol:
                report.passed = False
    return report
