"""Identity suites over the endomorphism calculus of one algebra.

Each check draws its own seeded randomness, reports a scaled maximum error
against a fixed tolerance, and never raises on failure: callers aggregate
the pass flags.  The scaled error of an identity lhs = rhs is
|lhs - rhs| / (1 + |rhs|), elementwise for array-valued identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraKind, JordanAlgebra
from .quadsplit import (
    SpectralSplit,
    SplitOperator,
    build_split_operator,
    case_table,
    dims_closed_form,
    outer,
    spanning_form,
    spectral_split,
    split_trace_closed,
)

N_TUPLES = 100
N_FORMS = 50


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    passed: bool
    count: int

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "count": self.count,
            "pass": self.passed,
        }


def _scaled(lhs, rhs) -> float:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs))))


def _result(name, errors, tol) -> CheckResult:
    worst = float(np.max(errors)) if len(errors) else 0.0
    return CheckResult(name, worst, tol, worst <= tol, len(errors))


def trace_identity_checks(algebra: JordanAlgebra, seed: int, tol: float = 1e-10):
    """Trace identities relating outer products to the Jordan structure:

        Tr(a (x) b)                      = tr(a o b)
        Tr[(a (x) b)(c (x) d)]           = tr(a o d) tr(b o c)
        Tr[(a1 (x) b1)...(a3 (x) b3)]    = tr(a1 b3) tr(a2 b1) tr(a3 b2)
        Tr[L(a) L(b) (c (x) d)]          = tr[(a o (b o c)) o d]
        Tr[P(a) (b (x) c)]               = tr[(P(a)b) o c]
    """
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(21,)))
    e1 = []
    e2 = []
    e3 = []
    e4 = []
    e5 = []
    for _ in range(N_TUPLES):
        a, b, c, d = (algebra.random_element(rng) for _ in range(4))
        ab = outer(a, b)
        e1.append(_scaled(np.trace(ab), algebra.inner(a, b)))
        e2.append(
            _scaled(
                np.trace(ab @ outer(c, d)),
                algebra.inner(a, d) * algebra.inner(b, c),
            )
        )
        a2, b2 = algebra.random_element(rng), algebra.random_element(rng)
        e3.append(
            _scaled(
                np.trace(ab @ outer(a2, b2) @ outer(c, d)),
                algebra.inner(a, d) * algebra.inner(a2, b) * algebra.inner(c, b2),
            )
        )
        la = algebra.lmat(a.coords)
        lb = algebra.lmat(b.coords)
        e4.append(
            _scaled(
                np.trace(la @ lb @ outer(c, d)),
                algebra.inner(a * (b * c), d),
            )
        )
        pa = algebra.pmat(a.coords)
        e5.append(
            _scaled(
                np.trace(pa @ outer(b, c)),
                float((pa @ b.coords) @ c.coords),
            )
        )
    return [
        _result("trace-outer", e1, tol),
        _result("trace-outer-pair", e2, tol),
        _result("trace-outer-cyclic3", e3, tol),
        _result("trace-lmul-pair-outer", e4, tol),
        _result("trace-quadrep-outer", e5, tol),
    ]


def split_operator_checks(
    algebra: JordanAlgebra,
    op: SplitOperator,
    split: SpectralSplit,
    seed: int,
):
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(22,)))
    dp = algebra.d / 2.0
    results = []

    scale = 1.0 + np.abs(op.mat).max()
    results.append(
        CheckResult(
            "split-symmetry",
            float(np.abs(op.mat - op.mat.T).max()) / scale,
            1e-10,
            bool(np.abs(op.mat - op.mat.T).max() <= 1e-10 * scale),
            1,
        )
    )

    evals = np.linalg.eigvalsh(op.mat)
    spectrum_dev = float(
        np.max(np.min(np.abs(evals[:, None] - np.array([[1.0, -dp]])), axis=1))
    )
    results.append(CheckResult("split-spectrum", spectrum_dev, 1e-9, spectrum_dev <= 1e-9, len(evals)))

    dim1, dim2 = dims_closed_form(algebra.r, algebra.d)
    dims_err = float(abs(split.dim1 - dim1) + abs(split.dim2 - dim2))
    results.append(CheckResult("split-dims-closed-form", dims_err, 0.0, dims_err == 0.0, 2))

    trace_err = abs(op.operator_trace() - split_trace_closed(algebra.r, algebra.d))
    results.append(CheckResult("split-trace-closed-form", float(trace_err), 1e-8, trace_err <= 1e-8, 1))

    defining = []
    image = []
    for _ in range(N_TUPLES):
        y = algebra.random_element(rng)
        yy = np.outer(y.coords, y.coords)
        py = algebra.pmat(y.coords)
        vec_yy = op.to_f_coords_raw(yy)
        vec_py = op.to_f_coords_raw(py)
        norm = 1.0 + float(np.linalg.norm(vec_py))
        defining.append(float(np.linalg.norm(op.mat @ vec_yy - vec_py)) / norm)
        target = dp * vec_yy + (1.0 - dp) * vec_py
        image.append(
            float(np.linalg.norm(op.mat @ vec_py - target)) / (1.0 + float(np.linalg.norm(target)))
        )
    results.append(_result("split-defining-rank-one", defining, 1e-10))
    results.append(_result("split-quadrep-image", image, 1e-10))

    # orthogonality of the two components under the trace inner product
    orth = []
    for _ in range(N_FORMS):
        f = rng.standard_normal(op.space_dim)
        g = rng.standard_normal(op.space_dim)
        f1 = split.proj1 @ f
        g2 = split.proj2 @ g
        orth.append(abs(float(f1 @ g2)) / (1.0 + np.linalg.norm(f1) * np.linalg.norm(g2)))
    results.append(_result("component-orthogonality", orth, 1e-9))

    # membership criterion: Tr[Psi(f) f] - Tr(f^2) = -(1 + d') |proj2 f|^2,
    # so equality holds exactly when the component-2 part vanishes
    crit = []
    member = []
    for _ in range(N_FORMS):
        f = rng.standard_normal(op.space_dim)
        gap = float(f @ op.mat @ f - f @ f)
        crit.append(_scaled(gap, -(1.0 + dp) * float(np.linalg.norm(split.proj2 @ f) ** 2)))
        f1 = split.proj1 @ f
        member.append(abs(float(f1 @ op.mat @ f1 - f1 @ f1)) / (1.0 + float(f1 @ f1)))
    results.append(_result("membership-criterion", crit, 1e-9))
    results.append(_result("membership-component1", member, 1e-9))

    # basis endomorphisms with diagonal entry 1 lie in component 1; none lie
    # in component 2
    diag = np.diag(op.mat)
    proj2_norms = np.linalg.norm(split.proj2, axis=0)
    proj1_norms = np.linalg.norm(split.proj1, axis=0)
    classify = []
    for idx in range(op.space_dim):
        in_one = proj2_norms[idx] <= 1e-9
        classify.append(0.0 if (abs(diag[idx] - 1.0) <= 1e-9) == in_one else 1.0)
    none_in_two = float(np.min(proj1_norms))
    results.append(_result("basis-classification", classify, 0.0))
    results.append(
        CheckResult(
            "basis-none-in-component2",
            0.0 if none_in_two > 1e-6 else 1.0,
            0.0,
            none_in_two > 1e-6,
            op.space_dim,
        )
    )
    return results


def spanning_form_checks(algebra: JordanAlgebra, split: SpectralSplit, seed: int):
    """The component forms of random s are annihilated by the opposite
    projector; for the spin kind the reflection (x0, xv) -> (x0, -xv) lies
    exactly in component 2."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(23,)))
    op = split.operator
    res1 = []
    res2 = []
    for _ in range(N_FORMS):
        s = algebra.random_element(rng)
        res1.append(split.residual(spanning_form(s, 1).endo, 1))
        res2.append(split.residual(spanning_form(s, 2).endo, 2))
    results = [
        _result("component1-form-residual", res1, 1e-9),
        _result("component2-form-residual", res2, 1e-9),
    ]
    if algebra.kind is AlgebraKind.SPIN_FACTOR:
        e = algebra.identity
        reflection = np.outer(e.coords, e.coords) - algebra.pmat(e.coords)
        vec = op.to_f_coords_raw(reflection)
        err = float(np.linalg.norm(split.proj1 @ vec)) / (1.0 + float(np.linalg.norm(vec)))
        results.append(CheckResult("spin-reflection-in-component2", err, 1e-9, err <= 1e-9, 1))
    return results


def case_table_checks(op: SplitOperator):
    table = case_table(op)
    value_err = max(stats.max_abs_dev for stats in table.values())
    count_err = sum(
        abs(stats.count - stats.expected_count) for stats in table.values()
    )
    return (
        [
            CheckResult("case-table-values", float(value_err), 1e-9, value_err <= 1e-9, len(table)),
            CheckResult("case-table-counts", float(count_err), 0.0, count_err == 0, len(table)),
        ],
        table,
    )


def identity_checks(algebra: JordanAlgebra, seed: int = 0):
    """Full suite; returns (checks, case_table, operator, split)."""
    op = build_split_operator(algebra)
    split = spectral_split(op)
    checks = []
    checks.extend(trace_identity_checks(algebra, seed))
    checks.extend(split_operator_checks(algebra, op, split, seed))
    checks.extend(spanning_form_checks(algebra, split, seed))
    table_checks, table = case_table_checks(op)
    checks.extend(table_checks)
    return checks, table, op, split
