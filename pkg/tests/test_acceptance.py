"""Acceptance gate: every primary contract criterion at its stated
tolerance, one printed pass/fail line each (run with -s to see them all).

Independent reference values used below:
  * operating point (omega_m = 3e3 /s, T = 2e-3 K, Q_m = 1e5):
    Lambda_T = (k_B T / 2 hbar omega_m)/Q_m = 0.43640113..., thermal
    occupation 87279.73..., both evaluated directly from CODATA constants;
  * first-revival exponent pi kappa^2 (12 Lambda + chi);
  * zero-friction exponent formulas hand-derived from the coefficient
    ODEs (see test_propagator docstring);
  * optimal temperature x* = sqrt(lambda/48) from minimizing
    6x + lambda/(8x) by hand.
"""

import math
import time

import numpy as np
import pytest

from mirrorvis import (
    PhysConstants,
    PhysicalParams,
    chi_identity_check,
    classicality_diagnostics,
    csl_threshold_curve,
    derive_dimensionless,
    dimensionless_params,
    first_revival,
    optimal_temperature,
    pde_residual,
    propagate,
    run_scan,
    scan_base,
    time_grid,
    visibility_closed_form,
    visibility_quadrature,
    visibility_single,
    visibility_thermal,
)

HBAR = 1.054571817e-34
KB = 1.380649e-23

OP = dict(M=1e-12, omega_m=3e3, omega_c=1e15, L=1e-2, T=2e-3, gamma=3e-2)


def report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, f"{name}: {detail}"


def dp(kappa=1.0, Lambda=0.0, chi=0.0, inv_Q=0.0, n_bar=0.0):
    return dimensionless_params(kappa=kappa, Lambda=Lambda, chi=chi,
                                inv_Q=inv_Q, n_bar=n_bar)


def rel_disc(a, b, floor=1e-9):
    return float(np.max(np.abs(a - b) / np.maximum(np.maximum(a, b), floor)))


def test_criterion_lambda_T_reproduction():
    p = PhysicalParams(**OP)
    derive_dimensionless(p)  # warm up
    t0 = time.perf_counter()
    d = derive_dimensionless(p)
    dt = time.perf_counter() - t0
    ok = 0.40 <= d.Lambda_T <= 0.50 and dt < 1e-3
    report("thermal decoherence strength reproduction", ok,
           f"Lambda_T = {d.Lambda_T:.6f} in [0.40, 0.50], {dt*1e6:.0f} us")


def test_criterion_thermal_occupation():
    d = derive_dimensionless(PhysicalParams(**OP))
    ok = 8.0e4 <= d.n_bar <= 9.5e4
    report("thermal occupation", ok, f"n_bar = {d.n_bar:.1f} in [8.0e4, 9.5e4]")


def test_criterion_route_agreement():
    t_start = time.perf_counter()
    taus_fine = time_grid(3.0, 2000)
    taus_quad = time_grid(3.0, 250)
    worst_ab = 0.0
    worst_ac_margin = np.inf
    slopes = []
    for kappa in (0.5, 1.0, 2.0):
        for n_bar in (0.0, 1.0, 10.0):
            for Lambda in (0.0, 0.1):
                for chi in (0.0, 0.05):
                    discs_ac = []
                    for Q in (1e3, 1e4):
                        d = dp(kappa, Lambda, chi, 1.0 / Q, n_bar)
                        nl_a = visibility_thermal(d, taus_fine).neg_log_nu
                        nl_c = visibility_closed_form(
                            d, taus_fine).neg_log_nu
                        disc = rel_disc(nl_a, nl_c)
                        discs_ac.append(disc)
                        tol_ac = max(1e-2, 5.0 / Q)
                        worst_ac_margin = min(worst_ac_margin, tol_ac - disc)

                        nl_a2 = visibility_thermal(d, taus_quad).neg_log_nu
                        if n_bar > 0:
                            nl_b = visibility_quadrature(
                                d, taus_quad, order=40).neg_log_nu
                            worst_ab = max(worst_ab, rel_disc(nl_a2, nl_b))
                        else:
                            # quadrature needs n_bar > 0; exercise its
                            # delta-function collapse limit instead
                            d0 = dp(kappa, Lambda, chi, 1.0 / Q, 1e-8)
                            nl_b = visibility_quadrature(
                                d0, taus_quad, order=40).neg_log_nu
                            single = -np.log(np.maximum(np.abs(
                                visibility_single(d0, 0.0, taus_quad)),
                                1e-300))
                            worst_ab = max(worst_ab, rel_disc(nl_b, single))
                    slopes.append(math.log10(discs_ac[0] / discs_ac[1]))
    runtime = time.perf_counter() - t_start
    slope_lo, slope_hi = min(slopes), max(slopes)
    ok = (worst_ab < 1e-6 and worst_ac_margin > 0
          and 0.8 <= slope_lo and slope_hi <= 1.2 and runtime < 60.0)
    report("route agreement (oracle equivalence)", ok,
           f"max ode-vs-quadrature {worst_ab:.2e} < 1e-6, "
           f"ode-vs-closed margin {worst_ac_margin:.2e} > 0, "
           f"discrepancy slope in [{slope_lo:.2f}, {slope_hi:.2f}], "
           f"{runtime:.1f} s < 60 s")


def test_criterion_pde_residual():
    d = dp(kappa=0.3, Lambda=0.05, chi=0.01, inv_Q=1e-3)
    samples = [(0.3, 0.2), (0.2, -0.3), (-0.25, 0.15)]
    r1 = pde_residual(propagate(d, 0.1 + 0.05j, math.pi, 2000,
                                error_estimate=False), d, samples)
    r2 = pde_residual(propagate(d, 0.1 + 0.05j, math.pi, 4000,
                                error_estimate=False), d, samples)
    ratio = r1 / r2
    ok = r1 < 1e-5 and 3.5 <= ratio <= 4.5
    report("equation-of-motion residual", ok,
           f"residual {r1:.2e} < 1e-5 at 2000 steps/period, "
           f"halving ratio {ratio:.2f} in [3.5, 4.5]")


def test_criterion_first_revival_formula():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(30):
        kappa = rng.uniform(0.5, 2.0)
        Lambda = rng.uniform(0.01, 1.0)
        chi = rng.choice([0.0, rng.uniform(0.0, 0.2)])
        n_bar = rng.uniform(0.0, 1e4)
        inv_Q = 10.0 ** rng.uniform(-7.0, math.log10(1.5e-5))
        d = dp(kappa, Lambda, chi, inv_Q, n_bar)
        fr = first_revival(d)
        gamma_t1 = inv_Q * fr.t1_seconds  # omega_m = 1
        assert gamma_t1 < 1e-4
        s = visibility_closed_form(d, np.array([0.0, fr.t1_seconds]))
        worst = max(worst, abs(s.neg_log_nu[1] - fr.neg_log_nu)
                    / fr.neg_log_nu)
    ok = worst < 1e-2
    report("first-revival formula", ok,
           f"closed form vs shortcut at t1: max rel {worst:.2e} < 1e-2 "
           "for gamma*t1 < 1e-4")


def test_criterion_decoherence_free_revival():
    taus = time_grid(1.0, 2000)
    i_half = 1000
    worst_revival = 0.0
    worst_half = 0.0
    for n_bar in (0.0, 5.0):
        d = dp(kappa=1.0, n_bar=n_bar)
        series = [visibility_thermal(d, taus),
                  visibility_closed_form(d, taus)]
        if n_bar > 0:
            series.append(visibility_quadrature(d, taus, order=40))
        else:
            series.append(visibility_quadrature(
                dp(kappa=1.0, n_bar=1e-12), taus, order=40))
        expect_half = 4.0 * (n_bar + 0.5)  # first-factor exponent at tau = pi
        for s in series:
            worst_revival = max(worst_revival, abs(s.nu[-1] - 1.0))
            worst_half = max(worst_half,
                             abs(s.neg_log_nu[i_half] - expect_half)
                             / expect_half)
        single = visibility_single(d, 0.0, taus)
        worst_revival = max(worst_revival, abs(abs(single[-1]) - 1.0))
    ok = worst_revival < 1e-10 and worst_half < 1e-9
    report("decoherence-free revival", ok,
           f"|nu(2pi) - 1| max {worst_revival:.2e} < 1e-10 on all routes, "
           f"half-period exponent rel err {worst_half:.2e} < 1e-9")


def test_criterion_classicality_check():
    worst_ext = 0.0
    worst_nar = 0.0
    rng = np.random.default_rng(23)
    for _ in range(20):
        p = PhysicalParams(M=10.0 ** rng.uniform(-14, -9),
                           omega_m=10.0 ** rng.uniform(2, 5),
                           omega_c=10.0 ** rng.uniform(14, 16),
                           L=10.0 ** rng.uniform(-3, -1),
                           T=10.0 ** rng.uniform(-4, 0),
                           gamma=0.0, lambda_qq=0.0)
        p = PhysicalParams(M=p.M, omega_m=p.omega_m, omega_c=p.omega_c,
                           L=p.L, T=p.T, gamma=p.omega_m * 1e-5)
        d = derive_dimensionless(p)
        ext, nar = classicality_diagnostics(d)
        si_ext = (KB * p.T * p.omega_c**2 * (p.gamma / p.omega_m)
                  / (4 * p.M * p.omega_m**4 * p.L**2))
        worst_ext = max(worst_ext, abs(ext - si_ext) / si_ext)
        if d.n_bar > 1e3:
            si_nar = KB * p.T * p.omega_c**2 / (2 * p.M * p.omega_m**4 * p.L**2)
            worst_nar = max(worst_nar, abs(nar - si_nar) / si_nar)
    ok = worst_ext < 1e-10 and worst_nar < 1e-3
    report("classicality check", ok,
           f"extinction vs SI form {worst_ext:.2e} < 1e-10; "
           f"narrowing vs high-T SI form {worst_nar:.2e} < 1e-3")


def test_criterion_turnback_optimum():
    base = scan_base(omega_m=3e3, lambda_qq=1.0)
    T_axis = np.logspace(-11, -6, 200)
    t_star = optimal_temperature(3e3, 1.0)
    argmins = []
    unimodal_ok = True
    bracket_ok = True
    for gamma in (1e-5, 1e-4, 1e-3, 1e-2):  # spans 3 decades
        g = run_scan(base, T_axis, np.array([gamma]), kappa=1.0)
        col = g.neg_log_nu[:, 0]
        i = int(np.argmin(col))
        argmins.append(i)
        unimodal_ok &= bool(np.all(np.diff(col[:i + 1]) < 0)
                            and np.all(np.diff(col[i:]) > 0))
        bracket_ok &= bool(T_axis[i - 1] <= t_star <= T_axis[i + 1])
    invariant_ok = len(set(argmins)) == 1
    ok = unimodal_ok and bracket_ok and invariant_ok
    report("turnback and optimal temperature", ok,
           f"200-point columns unimodal, minimum brackets "
           f"T* = {t_star:.3e} K within one cell, argmin fixed over "
           "3 decades of friction")


def test_criterion_chi_identity():
    rng = np.random.default_rng(29)
    c = PhysConstants()
    worst = 0.0
    for _ in range(200):
        om = 10.0 ** rng.uniform(0, 8)
        p = PhysicalParams(M=1e-12, omega_m=om, omega_c=1e15, L=1e-2,
                           T=10.0 ** rng.uniform(-8, 2),
                           gamma=om * 10.0 ** rng.uniform(-8, -1),
                           lambda_qq=rng.uniform(1.0, 10.0))
        lhs = chi_identity_check(p, c)
        rhs = p.lambda_qq * (c.hbar * p.omega_m / (4 * c.k_B * p.T)) ** 2
        worst = max(worst, abs(lhs - rhs) / rhs)
    ok = worst < 1e-12
    report("coordinate-diffusion identity", ok,
           f"chi/(4 Lambda_T) vs lambda (hbar w/4kT)^2: "
           f"max rel {worst:.2e} < 1e-12 over 200 random inputs")


def _fwhm(taus, nu, center):
    half = 0.5
    i0 = np.searchsorted(taus, center)
    lo = i0
    while nu[lo - 1] >= half:
        lo -= 1
    hi = i0
    while nu[hi + 1] >= half:
        hi += 1
    tl = np.interp(half, [nu[lo - 1], nu[lo]], [taus[lo - 1], taus[lo]])
    tr = np.interp(half, [nu[hi + 1], nu[hi]], [taus[hi + 1], taus[hi]])
    return tr - tl


def test_criterion_thermal_narrowing():
    taus = time_grid(1.2, 20000)
    w = {}
    for n_bar in (1e2, 1e4):
        s = visibility_closed_form(dp(kappa=1.0, n_bar=n_bar), taus)
        w[n_bar] = _fwhm(taus, s.nu, 2 * math.pi)
    ratio = w[1e4] / w[1e2]
    ok = 0.09 <= ratio <= 0.11
    report("thermal narrowing of the revival peak", ok,
           f"FWHM(1e4)/FWHM(1e2) = {ratio:.4f} in [0.09, 0.11]")


def test_criterion_default_scan_properties():
    t0 = time.perf_counter()
    base = scan_base(omega_m=3e3, lambda_qq=1.0)
    T_axis = np.logspace(-10, -2, 200)
    g_axis = np.logspace(-8, -1, 200)
    grid = run_scan(base, T_axis, g_axis, kappa=1.0)
    runtime = time.perf_counter() - t0

    # (i) monotone extinction in friction at fixed temperature
    mono = bool(np.all(np.diff(grid.neg_log_nu, axis=1) > 0))

    # (ii) lambda = 0 grid separates as T*gamma (rank-1 cross ratios)
    grid0 = run_scan(scan_base(omega_m=3e3, lambda_qq=0.0), T_axis, g_axis,
                     kappa=1.0)
    nl0 = grid0.neg_log_nu
    rng = np.random.default_rng(31)
    sep = True
    for _ in range(500):
        i, k = rng.integers(0, 200, 2)
        j, l = rng.integers(0, 200, 2)
        cross = (nl0[i, j] * nl0[k, l]) / (nl0[i, l] * nl0[k, j])
        sep &= bool(abs(cross - 1.0) < 1e-12)

    # (iii) lambda = 1 turnback: every friction column is unimodal in T
    turnback = True
    for j in range(0, 200, 10):
        col = grid.neg_log_nu[:, j]
        i = int(np.argmin(col))
        turnback &= bool(0 < i < 199
                         and np.all(np.diff(col[:i + 1]) < 0)
                         and np.all(np.diff(col[i:]) > 0))

    # (iv) the nonenvironmental-threshold curve at T = 2e-3 K; the
    # inversion gamma = 2 hbar omega_m^2 Lambda_CSL / (k_B T) evaluates
    # to 1.3749e-10 /s for Lambda_CSL = 2e-9 (independent evaluation here)
    gref = 2 * HBAR * (3e3) ** 2 * 2e-9 / (KB * 2e-3)
    g_at = csl_threshold_curve(grid, 2e-9)[1]
    gamma_interp = float(np.exp(np.interp(np.log(2e-3), np.log(T_axis),
                                          np.log(g_at))))
    curve_ok = abs(gamma_interp - gref) / gref < 0.05

    ok = mono and sep and turnback and curve_ok and runtime < 10.0
    report("contour-structure properties of the default scan", ok,
           f"monotone in gamma: {mono}; separable at lambda=0: {sep}; "
           f"turnback at lambda=1: {turnback}; threshold curve gives "
           f"gamma(2 mK) = {gamma_interp:.3e} /s vs {gref:.3e} (within 5%); "
           f"200x200 scan in {runtime:.2f} s < 10 s")
