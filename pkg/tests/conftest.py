from functools import lru_cache

import numpy as np
import pytest

from symcone import build_split_operator, make_algebra, spectral_split

# desk-scale set used by the invariant suites
DESK_SPECS = [
    ("sym", 1, None),
    ("sym", 2, None),
    ("sym", 3, None),
    ("sym", 4, None),
    ("herm", 2, None),
    ("herm", 3, None),
    ("herm", 4, None),
    ("quat", 2, None),
    ("quat", 3, None),
    ("quat", 4, None),
    ("spin", 2, 2),
    ("spin", 2, 3),
    ("spin", 2, 4),
    ("spin", 2, 9),
    ("albert", 3, None),
]

# subset with r >= 2 where the two-component split is non-trivial
SPLIT_SPECS = [spec for spec in DESK_SPECS if spec[1] >= 2 or spec[0] == "spin"]


def spec_id(spec):
    kind, rank, ambient = spec
    return f"{kind}-r{rank}" if ambient is None else f"{kind}-e{ambient}"


def algebra_for(spec):
    kind, rank, ambient = spec
    if kind == "spin":
        return make_algebra(kind, spin_ambient_dim=ambient)
    return make_algebra(kind, rank)


@pytest.fixture(params=DESK_SPECS, ids=spec_id)
def desk_algebra(request):
    return algebra_for(request.param)


@pytest.fixture(params=SPLIT_SPECS, ids=spec_id)
def split_algebra(request):
    return algebra_for(request.param)


@lru_cache(maxsize=None)
def split_for_spec(spec):
    algebra = algebra_for(spec)
    op = build_split_operator(algebra)
    return algebra, op, spectral_split(op)


@pytest.fixture(params=SPLIT_SPECS, ids=spec_id)
def algebra_op_split(request):
    return split_for_spec(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
