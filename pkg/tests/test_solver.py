"""Problem validation, the matching pipeline, and the insulated-rod series."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from heatrobin.polyalg import Poly1, Poly2
from heatrobin.solver import (
    CosineHeatSeries,
    ProblemSpec,
    _worker_count,
    cosine_coefficients,
    kernel_cosine_transform,
    kernel_cosine_transform_shifted,
    solve_neumann_neumann,
    solve_problem,
)
from heatrobin.verify import crank_nicolson_reference


def _nr_problem(mu0, F, T0, k=0.25, nu=0.5, l=1.0, T=1.0):
    return ProblemSpec(
        k=k, nu=nu, l=l, T=T, boundary="neumann_robin",
        mu0=Poly1(mu0, "x"), F=Poly2(F), T0=Poly1(T0, "t"),
    )


EX1 = dict(mu0=(1.0, 0.0, -2.0, 0.0, 1.0), F=((1.0, 2.0),), T0=(0.0, 1.0, 1.0))
EX2 = dict(mu0=(1.0, 0.0, 2.0), F=((0.0, 2.0, 3.0),), T0=(5.0, 1.0, 1.0, 1.0))


def test_problem_spec_validation():
    good = _nr_problem(**EX2)
    assert good.k == 0.25
    with pytest.raises(ValueError, match="k must be"):
        _nr_problem(**EX2, k=0.0)
    with pytest.raises(ValueError, match="T must be"):
        _nr_problem(**EX2, T=-1.0)
    with pytest.raises(ValueError, match="boundary"):
        ProblemSpec(k=1, nu=1, l=1, T=1, boundary="robin",
                    mu0=Poly1((1.0,), "x"), F=Poly2(()), T0=Poly1((), "t"))
    with pytest.raises(ValueError, match="mu0"):
        ProblemSpec(k=1, nu=1, l=1, T=1, boundary="neumann_robin",
                    mu0=Poly1((0.0, 1.0), "t"), F=Poly2(()), T0=Poly1((), "t"))
    with pytest.raises(ValueError, match="T0"):
        ProblemSpec(k=1, nu=1, l=1, T=1, boundary="neumann_robin",
                    mu0=Poly1((1.0,), "x"), F=Poly2(()), T0=Poly1((0.0, 1.0), "x"))
    with pytest.raises(ValueError, match="unit length"):
        ProblemSpec(k=1, nu=1, l=2.0, T=1, boundary="neumann_neumann",
                    mu0=Poly1((1.0,), "x"), F=Poly2(()), T0=Poly1((), "t"))


def test_compatibility_defect_formula():
    p = _nr_problem(**EX2)
    mu0 = p.mu0
    want = p.k * mu0.deriv()(p.l) + p.nu * (mu0(p.l) - p.T0(0.0))
    assert p.compatibility_defect() == pytest.approx(want, abs=1e-15)
    # tuned surroundings level that cancels the corner exactly
    pd = ProblemSpec(
        k=0.5, nu=0.8, l=1.0, T=1.0, boundary="dirichlet_robin",
        mu0=Poly1((0.0, 1.0), "x"),
        F=Poly2(((0.0, 0.0), (1.0, 1.0))),
        T0=Poly1((1.625, 1.0), "t"),
    )
    assert pd.compatibility_defect() == 0.0


def test_worker_count_env_cap(monkeypatch):
    monkeypatch.delenv("HEATROBIN_THREADS", raising=False)
    assert _worker_count() == 1
    assert _worker_count(4) == 4
    assert _worker_count(-2) == 1
    monkeypatch.setenv("HEATROBIN_THREADS", "3")
    assert _worker_count() == 3
    assert _worker_count(8) == 3
    assert _worker_count(2) == 2
    monkeypatch.setenv("HEATROBIN_THREADS", "not-a-number")
    assert _worker_count() == 1
    assert _worker_count(5) == 5


def test_solve_rejects_neumann_neumann():
    p = ProblemSpec(k=1, nu=1, l=1.0, T=1, boundary="neumann_neumann",
                    mu0=Poly1((1.0,), "x"), F=Poly2(()), T0=Poly1((), "t"))
    with pytest.raises(ValueError, match="solve_neumann_neumann"):
        solve_problem(p)


def test_polynomial_exact_case_reproduced():
    # data manufactured from u = 2x^2 + t^3 + t^2 + t + 1, which the
    # polynomial part must capture with no modal correction
    sol = solve_problem(_nr_problem(**EX2))
    xs = np.linspace(0.0, 1.0, 21)
    ts = np.linspace(0.0, 1.0, 21)
    want = 2.0 * xs[None, :] ** 2 + (ts**3 + ts**2 + ts + 1.0)[:, None]
    got = sol.on_grid(xs, ts)
    assert np.max(np.abs(got - want)) < 1e-9
    assert max(abs(a) for a in sol.modal.amplitudes) < 1e-10
    pad = np.zeros((3, 4))
    pad[0] = (1.0, 1.0, 1.0, 1.0)
    pad[2, 0] = 2.0
    assert np.allclose(sol.poly_part.array, pad, rtol=0.0, atol=1e-12)


def test_source_only_case_has_zero_profile():
    # data manufactured from u = t^2 + t: the particular solution consumes
    # the whole boundary target, leaving a zero matching profile
    sol = solve_problem(_nr_problem(**EX1))
    assert sol.profile.mu_poly().is_zero()
    assert sol.profile.d == 0.0
    assert sol.profile.c_t == 0.0
    arr = sol.poly_part.array
    want = np.zeros_like(arr)
    want[0, :3] = (0.0, 1.0, 1.0)
    assert np.allclose(arr, want, rtol=0.0, atol=1e-12)


def test_constant_offset_vanishes_when_matching_is_complete():
    rng = np.random.default_rng(31)
    for _ in range(10):
        mu0 = tuple(rng.uniform(-2, 2, 3))
        F = (tuple(rng.uniform(-2, 2, 2)),)
        T0 = tuple(rng.uniform(-2, 2, 3))
        sol = solve_problem(_nr_problem(mu0, F, T0))
        assert sol.profile.c_t == 0.0
        assert sol.modal.offset == 0.0


def test_point_evaluation_matches_grid():
    sol = solve_problem(_nr_problem(**EX1), n_max=48)
    for x, t in [(0.0, 0.2), (0.7, 0.01), (1.0, 1.0)]:
        g = sol.on_grid([x], [t])[0, 0]
        assert abs(sol(x, t) - g) < 2e-10


def test_corner_mismatch_raises_diagnostic():
    # EX1 and EX2 data are corner-compatible by construction
    for ex in (EX1, EX2):
        compat = solve_problem(_nr_problem(**ex))
        assert not any("corner" in d for d in compat.diagnostics)
        assert compat.compatibility_defect == 0.0
    mismatched = solve_problem(
        _nr_problem((1.0, 0.0, 3.0, 1.0), ((2.0, 5.0),), (1.0, 3.0))
    )
    assert abs(mismatched.compatibility_defect - 4.25) < 1e-14
    assert any("inconsistent at the corner" in d for d in mismatched.diagnostics)
    assert any("trace matrix entry" in d for d in mismatched.diagnostics)


def test_value_left_solution_decays_without_forcing():
    p = ProblemSpec(
        k=0.5, nu=0.8, l=1.0, T=1.0, boundary="dirichlet_robin",
        mu0=Poly1((0.0, 1.0), "x"), F=Poly2(()), T0=Poly1((), "t"),
    )
    sol = solve_problem(p)
    assert sol.modal.trig == "sin"
    xs = np.linspace(0.0, 1.0, 41)
    ts = np.linspace(0.05, 1.0, 20)
    mx = np.max(np.abs(sol.on_grid(xs, ts)), axis=1)
    assert np.all(np.diff(mx) < 0.0)
    assert abs(mx[0] - 0.7024926728601689) < 1e-12
    assert abs(mx[-1] - 0.06357007600268398) < 1e-12


def test_value_left_pipeline_profile_pinned():
    pd = ProblemSpec(
        k=0.5, nu=0.8, l=1.0, T=1.0, boundary="dirichlet_robin",
        mu0=Poly1((0.0, 1.0), "x"),
        F=Poly2(((0.0, 0.0), (1.0, 1.0))),
        T0=Poly1((1.625, 1.0), "t"),
    )
    sol = solve_problem(pd)
    assert np.allclose(
        sol.profile.coeffs,
        (0.9636423405654175, 0.06837606837606838, -0.03333333333333333),
        rtol=0.0,
        atol=1e-14,
    )
    assert sol.profile.d == 1.625
    assert sol.profile.c_t == 0.0
    assert sol.profile.parity == "odd"


def test_solution_is_linear_in_the_data():
    p1 = _nr_problem(**EX1)
    p2 = _nr_problem(**EX2)
    psum = _nr_problem(
        mu0=tuple(np.polynomial.polynomial.polyadd(EX1["mu0"], EX2["mu0"])),
        F=(tuple(np.polynomial.polynomial.polyadd(EX1["F"][0], EX2["F"][0])),),
        T0=tuple(np.polynomial.polynomial.polyadd(EX1["T0"], EX2["T0"])),
    )
    xs = np.linspace(0.0, 1.0, 21)
    ts = np.linspace(0.0, 1.0, 11)
    apart = solve_problem(p1).on_grid(xs, ts) + solve_problem(p2).on_grid(xs, ts)
    together = solve_problem(psum).on_grid(xs, ts)
    assert np.max(np.abs(apart - together)) < 1e-9


def test_cosine_coefficients_polynomial_exact():
    coeffs = cosine_coefficients(Poly1((0.0, 1.0), "x"), 6)
    assert abs(coeffs[0] - 0.5) < 1e-15
    for n in range(1, 6):
        want = 2.0 * ((-1.0) ** n - 1.0) / (n * math.pi) ** 2
        assert abs(coeffs[n] - want) < 1e-14, n
    assert abs(coeffs[1] - (-0.40528473456935105)) < 1e-14
    assert coeffs[2] == pytest.approx(0.0, abs=1e-15)
    assert abs(coeffs[3] - (-0.045031637174372335)) < 1e-14
    num, _ = quad(lambda x: 2.0 * x * math.cos(math.pi * x), 0.0, 1.0)
    assert abs(coeffs[1] - num) < 1e-13


def test_cosine_coefficients_sequence_passthrough():
    out = cosine_coefficients([1.0, 2.0, 3.0], 5)
    assert np.array_equal(out, [1.0, 2.0, 3.0, 0.0, 0.0])
    out = cosine_coefficients([1.0, 2.0, 3.0], 2)
    assert np.array_equal(out, [1.0, 2.0])
    with pytest.raises(ValueError, match="in x"):
        cosine_coefficients(Poly1((0.0, 1.0), "t"), 4)


def test_cosine_series_closed_form_terms():
    ser = CosineHeatSeries(0.5, (0.2, 0.3), (0.4, 0.5))
    x, t = 0.3, 0.7
    rate = math.pi**2 * 0.5
    want = (
        0.2
        + 0.4 * t
        + (0.3 * math.exp(-rate * t) + 0.5 * (1.0 - math.exp(-rate * t)) / rate)
        * math.cos(math.pi * x)
    )
    assert abs(ser(x, t) - want) < 1e-14
    g = ser.grid([x], [t])
    assert g.shape == (1, 1)
    assert abs(g[0, 0] - want) < 1e-14
    with pytest.raises(ValueError, match="positive"):
        CosineHeatSeries(0.0, (1.0,), (0.0,))


def test_insulated_rod_conserves_mean_and_flux():
    # mu0 = x^2 (3 - 2x) has zero slope at both ends; no source, so the
    # spatial mean stays at its initial value 1/2
    mu0 = Poly1((0.0, 0.0, 3.0, -2.0), "x")
    ser = solve_neumann_neumann(Poly1((), "x"), mu0, 0.5, n_max=48)
    xs = np.linspace(0.0, 1.0, 201)
    for t in (0.05, 0.4, 2.0):
        row = ser.grid(xs, [t])[0]
        mean = np.trapezoid(row, xs)
        assert abs(mean - 0.5) < 1e-8, t
        h = 1e-5
        edge = ser.grid([0.0, h, 1.0 - h, 1.0], [t])[0]
        assert abs(edge[1] - edge[0]) / h < 1e-3
        assert abs(edge[3] - edge[2]) / h < 1e-3
    # a constant source raises the mean linearly in time
    ser2 = solve_neumann_neumann(Poly1((2.0,), "x"), mu0, 0.5, n_max=48)
    row = ser2.grid(xs, [1.0])[0]
    assert abs(np.trapezoid(row, xs) - (0.5 + 2.0)) < 1e-8
    with pytest.raises(ValueError, match="n_max"):
        solve_neumann_neumann(Poly1((), "x"), mu0, 0.5, n_max=0)


def test_insulated_rod_matches_finite_difference():
    mu0 = Poly1((0.0, 0.0, 3.0, -2.0), "x")
    f = Poly1((1.0, -1.0), "x")
    ser = solve_neumann_neumann(f, mu0, 0.5, n_max=64)
    p = ProblemSpec(
        k=0.5, nu=1.0, l=1.0, T=1.0, boundary="neumann_neumann",
        mu0=mu0, F=Poly2(tuple((c,) for c in f.coeffs)), T0=Poly1((), "t"),
    )
    cn = crank_nicolson_reference(p, 200, 200)
    mask = cn.ts >= 0.05
    mine = ser.grid(cn.xs, cn.ts[mask])
    diff = float(np.max(np.abs(mine - cn.values[mask])))
    assert diff < 5e-4, diff


def test_kernel_transform_closed_form():
    assert kernel_cosine_transform(0, 1.0, 0.5) == 1.0
    assert abs(kernel_cosine_transform(2, 0.25, 0.1) - math.exp(-4 * math.pi**2 * 0.025)) < 1e-15
    got = kernel_cosine_transform_shifted(3, 0.25, 0.2, 0.4)
    want = math.cos(3 * math.pi * 0.4) * math.exp(-9 * math.pi**2 * 0.05)
    assert abs(got - want) < 1e-15
    with pytest.raises(ValueError, match="t must be"):
        kernel_cosine_transform(1, 1.0, 0.0)
    with pytest.raises(ValueError, match="k must be"):
        kernel_cosine_transform(1, -1.0, 0.5)
