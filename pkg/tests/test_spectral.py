import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cauchygap.measures import MeasureParams
from cauchygap.spectral import (
    Discretization,
    GapReport,
    assemble_mode,
    closed_form_gap,
    gap_sweep,
    lowest_eigs,
    numeric_gap,
    rayleigh_quotient_1d,
    rayleigh_quotient_power,
    upper_bound_min,
    write_sweep_csv,
)


def test_closed_form_values_and_tags():
    # n = 1 branches
    assert closed_form_gap(MeasureParams(1, 1.0)) == (0.25, "lower")
    v, t = closed_form_gap(MeasureParams(1, 1.5))
    assert np.isclose(v, 1.0) and t == "lower"  # tie goes to the lower branch
    v, t = closed_form_gap(MeasureParams(1, 4.0))
    assert np.isclose(v, 6.0) and t == "upper"
    # n >= 2: three branches
    v, t = closed_form_gap(MeasureParams(2, 1.5))
    assert np.isclose(v, 0.25) and t == "lower"
    v, t = closed_form_gap(MeasureParams(2, 3.0))
    assert np.isclose(v, 4.0) and t == "lower"  # n/2+2 = n+1 = 3 triple point
    v, t = closed_form_gap(MeasureParams(3, 4.0))
    assert np.isclose(v, 6.0) and t == "mid"
    v, t = closed_form_gap(MeasureParams(3, 6.0))
    assert np.isclose(v, 10.0) and t == "upper"
    v, t = closed_form_gap(MeasureParams(4, 4.5))
    assert np.isclose(v, 6.0) and t == "mid"


@given(st.integers(min_value=1, max_value=6),
       st.floats(min_value=1e-3, max_value=1e-1))
@settings(max_examples=50, deadline=None)
def test_closed_form_branch_continuity(n, h):
    # the piecewise formula is continuous across both junctions
    joints = [1.5] if n == 1 else [n / 2.0 + 2.0, n + 1.0]
    for b0 in joints:
        lo, _ = closed_form_gap(MeasureParams(n, b0 - h))
        hi, _ = closed_form_gap(MeasureParams(n, b0 + h))
        mid, _ = closed_form_gap(MeasureParams(n, b0))
        # branch slopes at the junctions are at most 4, so the jump is O(h)
        assert abs(hi - lo) <= 8.0 * h + 1e-12
        assert min(lo, hi) - 1e-12 <= mid <= max(lo, hi) + 1e-12


@given(st.integers(min_value=1, max_value=5),
       st.floats(min_value=0.01, max_value=8.0))
@settings(max_examples=80, deadline=None)
def test_upper_bound_min_equals_closed_form(n, excess):
    p = MeasureParams(n, n / 2.0 + excess)
    v, _ = closed_form_gap(p)
    assert np.isclose(upper_bound_min(p), v, rtol=1e-13)


def test_rayleigh_power_family():
    # frozen oracle pins (independent closed-moment evaluation)
    assert np.isclose(rayleigh_quotient_power(0.2499, MeasureParams(2, 1.5)),
                      0.25015000999800036, rtol=1e-13)
    assert np.isclose(rayleigh_quotient_power(0.2499, MeasureParams(3, 2.0)),
                      0.2501557356004688, rtol=1e-13)
    # decreasing approach to (beta - n/2)^2 from above as eps -> eps_max
    p = MeasureParams(2, 1.8)
    eps_max = (2.0 * p.beta - p.n) / 4.0
    limit = (p.beta - p.n / 2.0) ** 2
    vals = [rayleigh_quotient_power(eps_max - d, p) for d in (0.2, 0.05, 1e-3, 1e-6)]
    assert all(vals[i] > vals[i + 1] for i in range(len(vals) - 1))
    assert vals[-1] > limit
    assert abs(vals[-1] - limit) < 1e-4
    with pytest.raises(ValueError):
        rayleigh_quotient_power(0.0, p)
    with pytest.raises(ValueError):
        rayleigh_quotient_power(eps_max, p)


def test_rayleigh_1d_family():
    # frozen oracle pin for the odd line family
    assert np.isclose(rayleigh_quotient_1d(-0.2501, 1.0),
                      0.25016668444207435, rtol=1e-13)
    # approaches (beta - 1/2)^2 at the admissibility edge
    beta = 1.2
    eps_max = (2.0 * beta - 3.0) / 4.0
    vals = [rayleigh_quotient_1d(eps_max - d, beta) for d in (0.1, 1e-3, 1e-6)]
    limit = (beta - 0.5) ** 2
    assert all(v > limit for v in vals)
    assert abs(vals[-1] - limit) < 1e-4
    # beta > 3/2: eps = 0 is admissible and gives the linear function exactly
    assert np.isclose(rayleigh_quotient_1d(0.0, 2.0), 2.0, rtol=1e-12)


def test_discretization():
    d = Discretization(m=128, delta=1e-2)
    r = d.radii()
    assert r.shape == (128,)
    assert r[0] == 0.0
    assert np.all(np.diff(r) > 0)
    assert np.isclose(r[-1], np.tan(np.pi / 2.0 - 1e-2))
    with pytest.raises(ValueError):
        Discretization(m=16)
    with pytest.raises(ValueError):
        Discretization(delta=0.5)


def test_assemble_mode_structure():
    p = MeasureParams(2, 3.0)
    disc = Discretization(m=96, delta=1e-2)
    p0 = assemble_mode(0, p, disc)
    assert p0.ell == 0
    assert np.allclose(p0.A, p0.A.T)
    assert np.allclose(p0.B, p0.B.T)
    # constants lie in the kernel of the Dirichlet form (hat functions sum
    # to one; ray columns are built relative to the constant already)
    ones = np.zeros(p0.size())
    ones[: len(p0.radii)] = 1.0
    resid = p0.A @ ones
    assert np.max(np.abs(resid)) < 1e-10
    # B is positive definite
    assert np.all(np.linalg.eigvalsh(p0.B) > 0)
    p1 = assemble_mode(1, p, disc)
    assert p1.size() < p0.size() + 2  # node at r = 0 dropped for ell >= 1
    # eigenvalues of every mode are strictly positive after the zero mode
    e0 = lowest_eigs(p0, 3)
    assert abs(e0[0]) < 1e-8
    assert e0[1] > 0.1
    e1 = lowest_eigs(p1, 2)
    assert e1[0] > 0.1


def test_eigen_upper_bounds_are_true_upper_bounds():
    # Galerkin eigenvalues bound the true ones from above: with the closed
    # form known exactly, rel_error must be >= -(discretization noise)
    disc = Discretization(m=256, delta=1e-3)
    for n, beta in [(2, 4.0), (3, 5.0), (1, 2.0), (2, 1.5)]:
        rep = numeric_gap(MeasureParams(n, beta), disc)
        assert rep.rel_error > -1e-9


def test_numeric_gap_matches_closed_form_upper_range():
    # upper range: gap carried by the linear (ell = 1) sector, which the ray
    # augmented basis captures exactly
    disc = Discretization(m=256, delta=1e-3)
    rep = numeric_gap(MeasureParams(3, 5.0), disc)
    assert isinstance(rep, GapReport)
    assert rep.range_tag == "upper"
    assert rep.minimizing_mode == 1
    assert abs(rep.rel_error) < 1e-8
    assert len(rep.mode_eigs) == 4
    assert rep.numeric_gap == min(rep.mode_eigs)


def test_numeric_gap_mid_range():
    disc = Discretization(m=512, delta=1e-3)
    rep = numeric_gap(MeasureParams(3, 3.8), disc)
    assert rep.range_tag == "mid"
    assert rep.minimizing_mode == 0  # radial quadratic-type minimizer
    assert abs(rep.rel_error) < 5e-3


def test_numeric_gap_line():
    disc = Discretization(m=256, delta=1e-3)
    rep = numeric_gap(MeasureParams(1, 3.0), disc)
    assert rep.range_tag == "upper"
    assert len(rep.mode_eigs) == 2  # even + odd sectors only
    assert abs(rep.rel_error) < 1e-8
    with pytest.raises(ValueError):
        numeric_gap(MeasureParams(1, 3.0), disc, ell_max=1)


def test_gap_report_json_roundtrip():
    import json

    rep = numeric_gap(MeasureParams(2, 4.0), Discretization(m=128, delta=1e-2))
    d = json.loads(rep.to_json())
    assert d["n"] == 2 and d["beta"] == 4.0
    assert d["range_tag"] == rep.range_tag
    assert np.isclose(d["numeric_gap"], rep.numeric_gap)
    assert d["m"] == 128


def test_sweep_csv_deterministic(tmp_path):
    disc = Discretization(m=96, delta=1e-2)
    betas = np.linspace(1.2, 4.0, 5)
    reports = gap_sweep(2, betas, disc)
    assert [r.beta for r in reports] == list(betas)
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_sweep_csv(reports, f1)
    write_sweep_csv(gap_sweep(2, betas, disc), f2)
    assert f1.read_bytes() == f2.read_bytes()
    header = f1.read_text().splitlines()[0]
    assert header.split(",") == ["n", "beta", "range_tag", "closed_form",
                                 "numeric_gap", "rel_error",
                                 "minimizing_mode", "m", "delta"]
    assert len(f1.read_text().splitlines()) == 6
