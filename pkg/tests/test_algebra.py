import json
import pathlib

import numpy as np
import pytest

from symcone import (
    AlgebraError,
    AlgebraMismatchError,
    FrameError,
    make_algebra,
)

GOLDEN = pathlib.Path(__file__).parent / "golden"


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kind,rank,ambient,n,d",
    [
        ("sym", 3, None, 6, 1),
        ("sym", 2, None, 3, 1),
        ("herm", 2, None, 4, 2),
        ("herm", 3, None, 9, 2),
        ("quat", 3, None, 15, 4),
        ("spin", 2, 4, 5, 3),
        ("spin", 2, 9, 10, 8),
        ("albert", 3, None, 27, 8),
    ],
)
def test_dimensions(kind, rank, ambient, n, d):
    alg = make_algebra(kind, rank, spin_ambient_dim=ambient)
    assert alg.n == n
    assert alg.d == d
    # dim V = r + (d/2) r (r-1)
    assert alg.n == alg.r + alg.d * alg.r * (alg.r - 1) // 2


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "albert", "r": 2},
        {"kind": "spin", "r": 3, "spin_ambient_dim": 4},
        {"kind": "spin"},
        {"kind": "spin", "spin_ambient_dim": 1},
        {"kind": "sym", "r": 0},
        {"kind": "sym", "r": 2, "spin_ambient_dim": 3},
        {"kind": "nope", "r": 2},
        {"kind": "herm"},
    ],
)
def test_invalid_construction(kwargs):
    with pytest.raises(AlgebraError):
        make_algebra(**kwargs)


def test_basis_orthonormal(desk_algebra):
    alg = desk_algebra
    gram = np.array(
        [
            [alg.inner(alg.basis_element(i), alg.basis_element(j)) for j in range(alg.n)]
            for i in range(alg.n)
        ]
    )
    assert np.abs(gram - np.eye(alg.n)).max() < 1e-12


def test_product_tensor_fully_symmetric(desk_algebra):
    c = desk_algebra.product_tensor
    assert np.abs(c - c.transpose(1, 0, 2)).max() < 1e-12
    # associativity of the trace form makes <e_i o e_j, e_k> symmetric in all
    # three slots
    assert np.abs(c - c.transpose(2, 1, 0)).max() < 1e-12


# ---------------------------------------------------------------------------
# product
# ---------------------------------------------------------------------------


def test_spin_product_example():
    alg = make_algebra("spin", spin_ambient_dim=2)
    x = alg.from_natural((1.0, [1.0, 0.0]))
    y = alg.from_natural((2.0, [0.0, 1.0]))
    z0, zv = alg.to_natural(x * y)
    assert z0 == pytest.approx(2.0)
    assert np.allclose(zv, [2.0, 1.0])


def test_unit_law(desk_algebra, rng):
    alg = desk_algebra
    for _ in range(10):
        x = alg.random_element(rng)
        assert np.allclose((x * alg.identity).coords, x.coords, atol=1e-12)


def test_orthogonal_idempotents_sym2():
    alg = make_algebra("sym", 2)
    c1, c2 = alg.standard_frame().idempotents
    assert (c1 * c2).norm() < 1e-14


def test_product_commutative_bilinear(desk_algebra, rng):
    alg = desk_algebra
    x, y, z = (alg.random_element(rng) for _ in range(3))
    assert np.allclose((x * y).coords, (y * x).coords, atol=1e-12)
    lhs = (x * (2.0 * y + z)).coords
    rhs = 2.0 * (x * y).coords + (x * z).coords
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_mixed_algebra_rejected():
    a = make_algebra("sym", 2)
    b = make_algebra("herm", 2)
    with pytest.raises(AlgebraMismatchError):
        a.identity * b.identity
    with pytest.raises(AlgebraMismatchError):
        a.identity + b.identity
    spin3 = make_algebra("spin", spin_ambient_dim=3)
    spin4 = make_algebra("spin", spin_ambient_dim=4)
    with pytest.raises(AlgebraMismatchError):
        spin3.identity * spin4.identity


def test_jordan_identity(desk_algebra, rng):
    alg = desk_algebra
    # all basis triples
    eye = np.eye(alg.n)
    for i in range(alg.n):
        x = eye[i]
        x2 = alg.product_coords(x, x)
        for j in range(alg.n):
            y = eye[j]
            lhs = alg.product_coords(x2, alg.product_coords(x, y))
            rhs = alg.product_coords(x, alg.product_coords(x2, y))
            assert np.linalg.norm(lhs - rhs) <= 1e-10
    # random triples
    for _ in range(100):
        x = alg.random_element(rng)
        y = alg.random_element(rng)
        x2 = x * x
        lhs = (x2 * (x * y)) - (x * (x2 * y))
        bound = 1e-10 * (1.0 + x.norm() ** 3 * y.norm())
        assert lhs.norm() <= bound


def test_power_associativity(desk_algebra, rng):
    alg = desk_algebra
    for _ in range(20):
        x = alg.random_element(rng)
        x2 = x * x
        # x^3 computed as x2 * x and as x * x2
        assert np.allclose((x2 * x).coords, (x * x2).coords, atol=1e-11)
        # x^4 as x2*x2 and ((x2)*x)*x
        assert np.allclose((x2 * x2).coords, ((x2 * x) * x).coords, atol=1e-10)


# ---------------------------------------------------------------------------
# lmap / pmap
# ---------------------------------------------------------------------------


def test_lmap_identity(desk_algebra):
    alg = desk_algebra
    assert np.allclose(alg.lmap(alg.identity).mat, np.eye(alg.n), atol=1e-12)


def test_lmap_symmetric(desk_algebra, rng):
    alg = desk_algebra
    for _ in range(10):
        mat = alg.lmat(alg.random_element(rng).coords)
        assert np.abs(mat - mat.T).max() < 1e-12


def test_lmap_spin_frame_eigenvalues():
    alg = make_algebra("spin", spin_ambient_dim=4)
    c1 = alg.standard_frame().idempotents[0]
    evals = np.sort(np.linalg.eigvalsh(alg.lmap(c1).mat))
    expected = np.sort([0.0] + [0.5] * alg.d + [1.0])
    assert np.allclose(evals, expected, atol=1e-12)


def test_lmap_sym2_offdiagonal_halved():
    alg = make_algebra("sym", 2)
    e11 = alg.from_natural(np.array([[1.0, 0.0], [0.0, 0.0]]))
    off = alg.from_natural(np.array([[0.0, 1.0], [1.0, 0.0]]) / np.sqrt(2.0))
    assert np.allclose(alg.lmap(e11).apply(off).coords, 0.5 * off.coords, atol=1e-14)


def test_pmap_identity(desk_algebra):
    alg = desk_algebra
    assert np.allclose(alg.pmap(alg.identity).mat, np.eye(alg.n), atol=1e-12)


def test_pmap_sym2_projects():
    alg = make_algebra("sym", 2)
    e11 = alg.from_natural(np.array([[1.0, 0.0], [0.0, 0.0]]))
    x = alg.from_natural(np.array([[1.5, 0.25], [0.25, -2.0]]))
    # P(E11) x = E11 x E11 = x_11 E11
    assert np.allclose(alg.pmap(e11).apply(x).coords, 1.5 * e11.coords, atol=1e-13)


def test_pmap_matches_sandwich_sym3(rng):
    alg = make_algebra("sym", 3)
    for _ in range(20):
        a = alg.random_element(rng)
        x = alg.random_element(rng)
        lhs = alg.to_natural(alg.pmap(a).apply(x))
        am, xm = alg.to_natural(a), alg.to_natural(x)
        assert np.allclose(lhs, am @ xm @ am, atol=1e-10)


def test_spin_reflection():
    alg = make_algebra("spin", spin_ambient_dim=4)
    e = alg.identity
    refl = np.outer(e.coords, e.coords) - alg.pmap(e).mat
    x = alg.from_natural((1.25, [1.0, -2.0, 0.5, 3.0]))
    x0, xv = alg.to_natural(alg.element(refl @ x.coords))
    assert x0 == pytest.approx(1.25)
    assert np.allclose(xv, [-1.0, 2.0, -0.5, -3.0])


# ---------------------------------------------------------------------------
# trace / determinant
# ---------------------------------------------------------------------------


def test_trace_examples(desk_algebra, rng):
    alg = desk_algebra
    assert alg.trace(alg.identity) == pytest.approx(alg.r)
    for c in alg.standard_frame().idempotents:
        assert alg.trace(c) == pytest.approx(1.0, abs=1e-12)
    x, y = alg.random_element(rng), alg.random_element(rng)
    # linearity and compatibility with the inner product
    assert alg.trace(x + y) == pytest.approx(alg.trace(x) + alg.trace(y), rel=1e-12)
    assert alg.trace(x * y) == pytest.approx(alg.inner(x, y), rel=1e-10, abs=1e-12)


def test_trace_spin_formula():
    alg = make_algebra("spin", spin_ambient_dim=2)
    assert alg.trace(alg.from_natural((3.0, [1.0, 1.0]))) == pytest.approx(6.0)


def test_determinant_identity(desk_algebra):
    assert desk_algebra.determinant(desk_algebra.identity) == pytest.approx(1.0)


def test_determinant_spin_closed_form(rng):
    alg = make_algebra("spin", spin_ambient_dim=5)
    for _ in range(50):
        x = alg.random_element(rng)
        x0, xv = alg.to_natural(x)
        assert alg.determinant(x) == pytest.approx(x0**2 - xv @ xv, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("kind,rank", [("sym", 2), ("sym", 4), ("herm", 3)])
def test_determinant_vs_numpy(kind, rank, rng):
    alg = make_algebra(kind, rank)
    for _ in range(50):
        x = alg.random_element(rng)
        mat = alg.to_natural(x)
        ref = float(np.linalg.det(mat).real)
        assert alg.determinant(x) == pytest.approx(ref, rel=1e-8, abs=1e-9)


def _embed_quaternion(arr):
    # q = a + bi + cj + dk -> [[a+bi, c+di], [-(c+di)*, (a+bi)*]] blockwise
    alpha = arr[..., 0] + 1j * arr[..., 1]
    beta = arr[..., 2] + 1j * arr[..., 3]
    top = np.concatenate([alpha, beta], axis=1)
    bottom = np.concatenate([-beta.conj(), alpha.conj()], axis=1)
    return np.concatenate([top, bottom], axis=0)


def test_determinant_quaternion_embedding_oracle(rng):
    alg = make_algebra("quat", 2)
    diag = np.zeros((2, 2, 4))
    diag[0, 0, 0] = 2.0
    diag[1, 1, 0] = 3.0
    assert alg.determinant(alg.from_natural(diag)) == pytest.approx(6.0)
    for _ in range(30):
        g = alg.random_element(rng)
        x = g * g  # positive semidefinite; det >= 0 on both sides
        embedded = _embed_quaternion(alg.to_natural(x))
        assert np.abs(embedded - embedded.conj().T).max() < 1e-12
        ref = float(np.linalg.det(embedded).real)
        assert alg.determinant(x) ** 2 == pytest.approx(ref, rel=1e-8, abs=1e-9)


def test_determinant_homogeneity_and_quadratic_multiplicativity(desk_algebra, rng):
    alg = desk_algebra
    for _ in range(20):
        x = alg.random_element(rng)
        y = alg.random_element(rng)
        lam = float(rng.uniform(-2.0, 2.0))
        assert alg.determinant(lam * x) == pytest.approx(
            lam**alg.r * alg.determinant(x), rel=1e-9, abs=1e-10
        )
        lhs = alg.determinant(alg.pmap(y).apply(x))
        rhs = alg.determinant(y) ** 2 * alg.determinant(x)
        assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-8)


def test_rank2_cayley_hamilton_spin(rng):
    alg = make_algebra("spin", spin_ambient_dim=6)
    for _ in range(30):
        x = alg.random_element(rng)
        resid = (x * x) - alg.trace(x) * x + alg.determinant(x) * alg.identity
        assert resid.norm() < 1e-12 * (1.0 + x.norm() ** 2)


# ---------------------------------------------------------------------------
# frames and Peirce decomposition
# ---------------------------------------------------------------------------


def test_standard_frame_invariants(desk_algebra):
    alg = desk_algebra
    frame = alg.standard_frame()
    assert len(frame) == alg.r
    total = np.zeros(alg.n)
    for s, c in enumerate(frame.idempotents):
        assert ((c * c) - c).norm() < 1e-12
        assert alg.trace(c) == pytest.approx(1.0, abs=1e-12)
        total += c.coords
        for t in range(s):
            assert (c * frame.idempotents[t]).norm() < 1e-12
    assert np.allclose(total, alg.identity.coords, atol=1e-12)


def test_standard_frame_sym2_diagonal():
    alg = make_algebra("sym", 2)
    c1, c2 = alg.standard_frame().idempotents
    assert np.allclose(alg.to_natural(c1), [[1, 0], [0, 0]])
    assert np.allclose(alg.to_natural(c2), [[0, 0], [0, 1]])


@pytest.mark.parametrize(
    "kind,rank,ambient,off_dim",
    [("sym", 2, None, 1), ("herm", 2, None, 2), ("spin", 2, 4, 3), ("albert", 3, None, 8)],
)
def test_peirce_block_dimensions(kind, rank, ambient, off_dim):
    alg = make_algebra(kind, rank, spin_ambient_dim=ambient)
    basis = alg.peirce_basis()
    for s in range(alg.r):
        assert basis.blocks[(s, s)].shape == (1, alg.n)
        for t in range(s + 1, alg.r):
            assert basis.blocks[(s, t)].shape == (off_dim, alg.n)


def test_peirce_sym2_offdiagonal_element():
    alg = make_algebra("sym", 2)
    block = alg.peirce_basis().blocks[(0, 1)]
    expected = alg.from_natural(np.array([[0.0, 1.0], [1.0, 0.0]]) / np.sqrt(2.0))
    assert min(
        np.linalg.norm(block[0] - expected.coords),
        np.linalg.norm(block[0] + expected.coords),
    ) < 1e-12


def test_peirce_invariants(desk_algebra):
    alg = desk_algebra
    frame = alg.standard_frame()
    basis = alg.peirce_basis(frame)
    assert basis.matrix.shape == (alg.n, alg.n)
    assert np.abs(basis.matrix.T @ basis.matrix - np.eye(alg.n)).max() < 1e-10
    lmats = [alg.lmat(c.coords) for c in frame.idempotents]
    for (s, t), block in basis.blocks.items():
        for row in block:
            if s == t:
                # unit eigenvector of L(c_s)
                assert np.linalg.norm(lmats[s] @ row - row) < 1e-10
            else:
                assert np.linalg.norm(lmats[s] @ row - 0.5 * row) < 1e-10
                assert np.linalg.norm(lmats[t] @ row - 0.5 * row) < 1e-10
                # unit-norm x in V_st squares to (c_s + c_t)/2
                sq = alg.product_coords(row, row)
                target = 0.5 * (frame.idempotents[s].coords + frame.idempotents[t].coords)
                assert np.linalg.norm(sq - target) < 1e-10


def test_peirce_rejects_bad_frame():
    alg = make_algebra("sym", 2)
    from symcone import JordanFrame

    bad = JordanFrame(alg, (alg.identity, alg.identity))
    with pytest.raises(FrameError):
        alg.peirce_basis(bad)


def test_peirce_nonstandard_frame():
    # rotate the standard sym2 frame by an orthogonal conjugation
    alg = make_algebra("sym", 2)
    angle = 0.3
    u = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    from symcone import JordanFrame

    c1 = alg.from_natural(u @ np.diag([1.0, 0.0]) @ u.T)
    c2 = alg.from_natural(u @ np.diag([0.0, 1.0]) @ u.T)
    basis = alg.peirce_basis(JordanFrame(alg, (c1, c2)))
    assert basis.blocks[(0, 1)].shape == (1, alg.n)


# ---------------------------------------------------------------------------
# natural representations and serialization
# ---------------------------------------------------------------------------


def test_natural_roundtrip(desk_algebra, rng):
    alg = desk_algebra
    x = alg.random_element(rng)
    assert np.allclose(alg.from_natural(alg.to_natural(x)).coords, x.coords, atol=1e-12)


def test_herm_natural_is_complex():
    alg = make_algebra("herm", 2)
    x = alg.from_natural(np.array([[1.0, 0.5 + 0.25j], [0.5 - 0.25j, -1.0]]))
    mat = alg.to_natural(x)
    assert mat.dtype.kind == "c"
    assert np.abs(mat - mat.conj().T).max() < 1e-14
    assert alg.trace(x) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("spec", [("sym", 2, None), ("spin", 2, 3)])
def test_algebra_json_golden(spec):
    kind, rank, ambient = spec
    alg = make_algebra(kind, rank, spin_ambient_dim=ambient)
    name = f"{kind}_r{rank}.json" if ambient is None else f"{kind}_e{ambient}.json"
    with open(GOLDEN / name, "r", encoding="utf-8") as fh:
        frozen = json.load(fh)
    assert alg.to_json_dict() == frozen
