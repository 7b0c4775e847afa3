import numpy as np
import pytest

from semgeo import kernels
from semgeo.mds import classical_mds, classical_mds_coords, metric_mds, sign_fix
from semgeo.errors import NonFiniteInput

from oracles import brute_force_dists, procrustes_rms


@pytest.fixture(scope="module", autouse=True)
def _warm():
    kernels.warmup()


def planar_config(n, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-2.0, 2.0, size=(n, 2))


def test_sign_fix_pins_largest_entry_positive():
    v = np.array([[1.0, -3.0], [-2.0, 1.0], [0.5, 2.0]])
    out = sign_fix(v.copy())
    for j in range(out.shape[1]):
        idx = np.argmax(np.abs(out[:, j]))
        assert out[idx, j] > 0
    # column 0 largest |.| is -2 -> flipped; column 1 largest is -3 -> flipped
    assert np.array_equal(out, np.array([[-1.0, 3.0], [2.0, -1.0], [-0.5, -2.0]]))


def test_cmds_recovers_unit_square():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    d = brute_force_dists(pts)
    proj = classical_mds(d, out_dims=2)
    assert procrustes_rms(pts, proj.coords) < 1e-9
    assert proj.method == "cmds"
    assert proj.metadata["clipped_negative_eigs"] == 0


def test_cmds_collinear_second_axis_zero():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [2.5, 0.0], [4.0, 0.0]])
    d = brute_force_dists(pts)
    coords, clipped = classical_mds_coords(d, 2)
    # the second eigenvalue of B is ~1e-15, so the axis is sqrt of that
    assert np.abs(coords[:, 1]).max() < 1e-6
    assert procrustes_rms(pts, coords) < 1e-7


def test_cmds_random_planar_recovery():
    for seed in range(5):
        pts = planar_config(12, seed)
        d = brute_force_dists(pts)
        coords, _ = classical_mds_coords(d, 2)
        assert procrustes_rms(pts, coords) < 1e-8


def test_cmds_counts_clipped_negative_eigenvalues():
    # a random symmetric hollow matrix is generally not Euclidean
    rng = np.random.default_rng(7)
    d = rng.uniform(1.0, 2.0, size=(8, 8))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    proj = classical_mds(d, out_dims=7)
    assert proj.metadata["clipped_negative_eigs"] > 0
    assert np.isfinite(proj.coords).all()


def test_cmds_columns_orthogonal():
    pts = np.random.default_rng(3).normal(size=(20, 5))
    d = brute_force_dists(pts)
    coords, _ = classical_mds_coords(d, 3)
    g = coords.T @ coords
    off = g - np.diag(np.diag(g))
    assert np.abs(off).max() < 1e-8


def test_cmds_sign_convention_on_output():
    pts = planar_config(9, 11)
    d = brute_force_dists(pts)
    coords, _ = classical_mds_coords(d, 2)
    for j in range(2):
        assert coords[np.argmax(np.abs(coords[:, j])), j] > 0


def test_cmds_rejects_nonfinite():
    d = np.zeros((3, 3))
    d[0, 1] = d[1, 0] = np.nan
    with pytest.raises(NonFiniteInput):
        classical_mds(d, out_dims=2)


def test_cmds_single_point():
    proj = classical_mds(np.zeros((1, 1)), out_dims=2)
    assert proj.coords.shape == (1, 2)
    assert np.array_equal(proj.coords, np.zeros((1, 2)))


def test_metric_mds_recovers_planar_config():
    pts = planar_config(30, 0)
    d = brute_force_dists(pts)
    proj = metric_mds(d, out_dims=2, seed=0)
    assert procrustes_rms(pts, proj.coords) < 1e-6
    assert proj.stress < 1e-8


def test_metric_mds_stress_trace_non_increasing():
    rng = np.random.default_rng(5)
    # 5-D data forced into 2-D: stress stays positive, trace must still fall
    pts = rng.normal(size=(25, 5))
    d = brute_force_dists(pts)
    proj = metric_mds(d, out_dims=2, seed=1)
    trace = proj.metadata["stress_trace"]
    for a, b in zip(trace, trace[1:]):
        assert b <= a * (1 + 1e-9) + 1e-12
    assert proj.stress == trace[-1]


def test_metric_mds_stress_matches_direct_formula():
    pts = planar_config(15, 2)
    d = brute_force_dists(pts)
    proj = metric_mds(d, out_dims=2, seed=0)
    emb = brute_force_dists(proj.coords)
    direct = 0.0
    n = d.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            direct += (d[i, j] - emb[i, j]) ** 2
    assert abs(proj.stress - direct) <= 1e-9 * max(direct, 1.0)


def test_metric_mds_two_points():
    d = np.array([[0.0, 3.0], [3.0, 0.0]])
    proj = metric_mds(d, out_dims=2, seed=0)
    emb = np.linalg.norm(proj.coords[0] - proj.coords[1])
    assert abs(emb - 3.0) < 1e-9


def test_metric_mds_single_point():
    proj = metric_mds(np.zeros((1, 1)), out_dims=3, seed=0)
    assert proj.coords.shape == (1, 3)
    assert proj.stress == 0.0


def test_metric_mds_deterministic():
    pts = planar_config(20, 4)
    d = brute_force_dists(pts)
    a = metric_mds(d, out_dims=2, seed=0)
    b = metric_mds(d, out_dims=2, seed=0)
    assert np.array_equal(a.coords, b.coords)
    assert a.stress == b.stress


def test_metric_mds_identical_points_degenerate_start():
    # all-equal coordinates would freeze SMACOF without the jitter escape
    d = np.array([
        [0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
    ])
    proj = metric_mds(d, out_dims=2, seed=0)
    emb = brute_force_dists(proj.coords)
    assert abs(emb[0, 2] - 1.0) < 1e-3
    assert emb[0, 1] < 1e-3


def test_metric_mds_backend_parity():
    pts = planar_config(18, 6)
    d = brute_force_dists(pts)
    kernels.set_backend("numpy")
    try:
        a = metric_mds(d, out_dims=2, seed=3)
    finally:
        kernels.set_backend("numba" if kernels.HAS_NUMBA else "numpy")
    b = metric_mds(d, out_dims=2, seed=3)
    np.testing.assert_allclose(a.coords, b.coords, rtol=1e-9, atol=1e-12)
