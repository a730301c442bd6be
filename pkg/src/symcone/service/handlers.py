"""Request handlers shared by the HTTP endpoints and the CLI.

Each handler maps a request model to a response model; constructed
algebras and their split operators are cached per process, so repeated
requests against the same algebra skip the expensive assembly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..algebra import AlgebraKind, Element, JordanAlgebra, make_algebra
from ..checks import identity_checks
from ..errors import DomainError
from ..quadsplit import build_split_operator, spectral_split, split_trace_closed
from ..regression import (
    constants_from_shapes,
    diff_constants,
    diff_identity_report,
    mc_verify_linear,
    mc_verify_quadratic,
    recover_structure,
)
from ..wishart import GyndikinSet, WishartParams, laplace_check, sample_coords
from . import models


def algebra_from_selector(sel: models.AlgebraSelector) -> JordanAlgebra:
    kind = AlgebraKind.parse(sel.algebra)
    if kind is AlgebraKind.SPIN_FACTOR:
        return make_algebra(kind, spin_ambient_dim=sel.ambient)
    return make_algebra(kind, sel.rank)


def sigma_from_spec(algebra: JordanAlgebra, spec: str) -> Element:
    """Parse a scale specification.

    "identity"        the unit element e
    "diag:a,b,..."    sum of the frame idempotents weighted by the entries
    "random:SEED"     g o g for Gaussian g, shifted safely into the cone
    """
    spec = spec.strip()
    if spec in ("identity", "e", ""):
        return algebra.identity
    if spec.startswith("diag:"):
        try:
            weights = [float(v) for v in spec[len("diag:"):].split(",")]
        except ValueError:
            raise DomainError(f"bad diagonal sigma spec {spec!r}") from None
        if len(weights) != algebra.r:
            raise DomainError(
                f"diagonal sigma needs {algebra.r} entries, got {len(weights)}"
            )
        frame = algebra.standard_frame()
        coords = np.zeros(algebra.n)
        for w, c in zip(weights, frame.idempotents):
            coords += w * c.coords
        sigma = algebra.element(coords)
        if not algebra.in_cone(sigma):
            raise DomainError("diagonal sigma is not inside the open cone")
        return sigma
    if spec.startswith("random:"):
        try:
            seed = int(spec[len("random:"):])
        except ValueError:
            raise DomainError(f"bad random sigma spec {spec!r}") from None
        rng = np.random.default_rng(np.random.SeedSequence(seed & (2**64 - 1), spawn_key=(3,)))
        return algebra.random_cone_element(rng, margin=0.1)
    raise DomainError(
        f"unknown sigma spec {spec!r}; use 'identity', 'diag:...', or 'random:SEED'"
    )


@lru_cache(maxsize=32)
def _split_for(kind: AlgebraKind, rank: int, ambient):
    algebra = (
        make_algebra(kind, spin_ambient_dim=ambient)
        if kind is AlgebraKind.SPIN_FACTOR
        else make_algebra(kind, rank)
    )
    op = build_split_operator(algebra)
    return op, spectral_split(op)


def split_for(algebra: JordanAlgebra):
    return _split_for(algebra.kind, algebra.r, algebra.ambient_dim)


def run_info(req: models.InfoRequest) -> models.InfoResponse:
    algebra = algebra_from_selector(req)
    op, split = split_for(algebra)
    gset = GyndikinSet(algebra.d, algebra.r)
    return models.InfoResponse(
        kind=algebra.kind.value,
        rank=algebra.r,
        peirce_d=algebra.d,
        dim=algebra.n,
        ambient=algebra.ambient_dim,
        dim_component1=split.dim1,
        dim_component2=split.dim2,
        split_trace_numeric=op.operator_trace(),
        split_trace_closed=split_trace_closed(algebra.r, algebra.d),
        gyndikin_discrete=gset.discrete_points(),
        gyndikin_continuous_above=gset.continuous_threshold,
    )


def run_check_identities(req: models.CheckIdentitiesRequest) -> models.CheckIdentitiesResponse:
    algebra = algebra_from_selector(req)
    checks, table, op, split = identity_checks(algebra, seed=req.seed)
    return models.CheckIdentitiesResponse(
        config=req,
        kind=algebra.kind.value,
        rank=algebra.r,
        peirce_d=algebra.d,
        dim=algebra.n,
        dim_component1=split.dim1,
        dim_component2=split.dim2,
        split_trace_numeric=op.operator_trace(),
        split_trace_closed=split_trace_closed(algebra.r, algebra.d),
        case_table={name: models.CaseTableRow(**stats.to_dict()) for name, stats in table.items()},
        checks=[models.CheckRow(**c.to_dict(), passed=c.passed) for c in checks],
        passed=all(c.passed for c in checks),
    )


def _report_model(report) -> models.VerificationReportModel:
    data = report.to_dict()
    return models.VerificationReportModel(
        identity=data["identity"],
        constants={k: float(v) for k, v in data["constants"].items()},
        n_samples=data["n_samples"],
        seed=data["seed"],
        z_threshold=data["z_threshold"],
        rel_tol=data["rel_tol"],
        streams=data["streams"],
        rows=[models.VerificationRowModel(**row) for row in data["rows"]],
        passed=data["pass"],
    )


def _laplace_model(report) -> models.LaplaceReportModel:
    data = report.to_dict()
    return models.LaplaceReportModel(
        algebra=data["algebra"],
        p=data["p"],
        sigma=data["sigma"],
        n_samples=data["n_samples"],
        seed=data["seed"],
        z_threshold=data["z_threshold"],
        streams=data["streams"],
        laplace_grid=[models.LaplaceRowModel(**row) for row in data["laplace_grid"]],
        passed=data["pass"],
    )


def run_verify(req: models.VerifyRequest) -> models.VerifyResponse:
    algebra = algebra_from_selector(req)
    sigma = sigma_from_spec(algebra, req.sigma)
    constants = constants_from_shapes(req.p, req.p_prime, algebra.d)
    diff = diff_constants(constants)
    grid = None
    if req.theta_scales:
        from ..regression import default_theta_grid

        grid = default_theta_grid(algebra, req.seed, scales=req.theta_scales)
    # empirical Laplace gate on the exact streams the MC verifiers consume
    gates = []
    for shape, stream in ((req.p, 0), (req.p_prime, 1)):
        params = WishartParams(algebra, shape, sigma)
        coords = sample_coords(params, req.samples, req.seed, stream=stream)
        gates.append(laplace_check(params, req.samples, req.seed, coords=coords))
    reports = [
        mc_verify_linear(
            algebra, req.p, req.p_prime, sigma, req.samples, req.seed,
            theta_grid=grid, z_threshold=req.z_threshold,
        ),
        mc_verify_quadratic(
            algebra, req.p, req.p_prime, sigma, 1, req.samples, req.seed,
            theta_grid=grid, z_threshold=req.z_threshold,
        ),
        mc_verify_quadratic(
            algebra, req.p, req.p_prime, sigma, 2, req.samples, req.seed,
            theta_grid=grid, z_threshold=req.z_threshold,
        ),
        diff_identity_report(
            algebra, req.p, req.p_prime, sigma, n_checks=req.diff_checks, seed=req.seed,
        ),
    ]
    return models.VerifyResponse(
        config=req,
        constants={
            **constants.to_dict(),
            "p1": diff.p1,
            "p2": diff.p2,
        },
        sampler_gates=[_laplace_model(g) for g in gates],
        reports=[_report_model(r) for r in reports],
        passed=all(r.passed for r in reports) and all(g.passed for g in gates),
    )


def run_recover(req: models.RecoverRequest) -> models.RecoverResponse:
    rec = recover_structure(req.a, req.b1, req.b2, req.n)
    return models.RecoverResponse(
        config=req,
        peirce_d_raw=rec.d_raw,
        rank_raw=rec.r_raw,
        peirce_d=rec.d,
        rank=rec.r,
        kinds=[
            models.KindCandidate(kind=kind.value, ambient=amb)
            for kind, amb in rec.kind_candidates
        ],
    )


DIMS_TABLE_SPECS = (
    ("sym", 2, None),
    ("sym", 3, None),
    ("sym", 4, None),
    ("herm", 2, None),
    ("herm", 3, None),
    ("quat", 2, None),
    ("quat", 3, None),
    ("spin", 2, 2),
    ("spin", 2, 3),
    ("spin", 2, 4),
    ("spin", 2, 5),
    ("spin", 2, 6),
    ("albert", 3, None),
)


def run_dims_table() -> models.DimsTableResponse:
    rows = []
    for name, rank, ambient in DIMS_TABLE_SPECS:
        sel = models.AlgebraSelector(algebra=name, rank=rank, ambient=ambient)
        algebra = algebra_from_selector(sel)
        op, split = split_for(algebra)
        rows.append(
            models.DimsTableRow(
                kind=name,
                rank=algebra.r,
                ambient=algebra.ambient_dim,
                peirce_d=algebra.d,
                dim=algebra.n,
                endo_dim=op.space_dim,
                dim_component1=split.dim1,
                dim_component2=split.dim2,
                split_trace_closed=split_trace_closed(algebra.r, algebra.d),
            )
        )
    return models.DimsTableResponse(rows=rows)
