"""End-to-end acceptance gate.

One test per criterion.  Each test appends a single
"criterion N: PASS/FAIL - detail" line to the shared report, which the
terminal summary prints after the run.  The PDE experiments at the end
dominate the runtime; the whole module finishes in well under an hour.
"""

import math
import time
from fractions import Fraction

import numpy as np

from nls_solitons import dynamics as dyn
from nls_solitons import profiles as pf
from nls_solitons import sphere as sp
from nls_solitons import states as stt
from nls_solitons import systems as sy

SEED = 20240817


def report(sink, n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    sink.append(line)
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# Criterion 1: analytic sphere minimisation against the numeric search


def _match_minimisers(system):
    """Compare analytic and numeric sphere minima for one system.

    Returns (value_gap, orbit_gap, error).  error is None when the two
    family sets agree in kind and, for isolated orbits, pair up within
    the orbit metric.
    """
    ana = sp.gmin_analytic(system)
    num = sp.gmin_numeric(system)
    dv = abs(ana.value - num.value)
    ka = sorted(f.kind for f in ana.families)
    kn = sorted(f.kind for f in num.families)
    if ka != kn:
        return dv, math.inf, f"{system.describe()}: kinds {ka} vs {kn}"
    dorb = 0.0
    if all(k == "point" for k in ka):
        used = set()
        for fa in ana.families:
            best, bi = math.inf, None
            for i, fn in enumerate(num.families):
                if i in used:
                    continue
                dd = sp.orbit_distance(fa.generator, fn.generator, system.n)
                if dd < best:
                    best, bi = dd, i
            used.add(bi)
            dorb = max(dorb, best)
    return dv, dorb, None


# Draw helpers sample the open parameter regions with a small margin away
# from the branch boundaries, where the minimising set changes kind and a
# grid search cannot be expected to resolve near-ties.

def _draw_nls3(rng):
    while True:
        phi = rng.uniform(0.05, math.pi - 0.05)
        a1, a2 = math.cos(phi), math.sin(phi)
        if a2 < 0.02 or abs(abs(a1) - abs(a2)) < 0.02:
            continue
        return sy.nls3(a1, a2, rng.uniform(-3.0, 3.0))


def _draw_nls4(rng):
    while True:
        v = rng.normal(size=3)
        v = v / np.linalg.norm(v)
        a1, a2, a3 = float(v[0]), abs(float(v[1])), abs(float(v[2]))
        if a2 < 0.02 or a3 < 0.05 or abs(a1 - a2) < 0.02:
            continue
        if abs(a3 - max(a1 + a2, 2 * a2)) < 0.02:
            continue
        return sy.nls4(a1, a2, a3, rng.uniform(-3.0, 3.0))


def _draw_nls5(rng):
    while True:
        eta = rng.uniform(0.05, math.pi - 0.05)
        a2 = rng.uniform(0.05, 0.9)
        a3 = rng.uniform(0.05, 0.95)
        rest = 1.0 - a2 * a2 - a3 * a3
        if rest < 4e-4:
            continue
        a1 = math.sqrt(rest)
        if eta < math.pi / 2 - 0.02 and rng.random() < 0.5:
            a1 = -a1
        if abs(a1 - a2) < 0.02:
            continue
        rs = sp.rho_star(eta)
        if abs(a3 / a2 - rs) < 0.02 * max(1.0, rs):
            continue
        if a1 > a2:
            den = a1 * a1 + a2 * a2 - 2 * a1 * a2 * math.cos(2 * eta)
            bound = (a1 + a2) ** 2 * (a1 - a2) ** 2 / den
            if abs(a3 * a3 - bound) < 0.02:
                continue
        return sy.nls5(a1, a2, a3, eta, rng.uniform(-3.0, 3.0))


def _draw_co(rng):
    while True:
        gamma = rng.uniform(0.05, 3.0)
        if abs(gamma - 1.0) < 0.02:
            continue
        kappa = rng.uniform(-1.0, 3.0)
        if gamma < 1.0 and abs(kappa - sp.co_kappa_c(gamma)) < 0.02:
            continue
        if abs(kappa - gamma ** 1.5 / math.sqrt(2.0)) < 0.02:
            continue
        if kappa > 0 and abs(kappa * kappa + 2 * gamma * (gamma - 1.0)) < 0.02:
            continue
        return sy.colin_ohta(kappa, gamma)


def test_criterion_1_sphere_minimisation(acceptance_report):
    rng = np.random.default_rng(SEED)
    t0 = time.time()
    worst_v = worst_o = 0.0
    total = 0
    cache = {}

    def run(system, key=None):
        nonlocal worst_v, worst_o, total
        if key is not None and key in cache:
            dv, dorb = cache[key]
        else:
            dv, dorb, err = _match_minimisers(system)
            assert err is None, err
            assert dv <= 1e-6, (system.describe(), dv)
            assert dorb <= 1e-5, (system.describe(), dorb)
            if key is not None:
                cache[key] = (dv, dorb)
        worst_v = max(worst_v, dv)
        worst_o = max(worst_o, dorb)
        total += 1

    for _ in range(500):
        b, a = sorted(int(x) for x in rng.integers(-1, 2, size=2))
        run(sy.nls1(a, b), ("NLS1", a, b))
    for _ in range(500):
        b, a = sorted(int(x) for x in rng.integers(-1, 2, size=2))
        s = int(rng.integers(0, 2)) * 2 - 1
        run(sy.nls2(a, b, s), ("NLS2", a, b, s))
    for _ in range(500):
        run(_draw_nls3(rng))
    for _ in range(500):
        run(_draw_nls4(rng))
    for _ in range(500):
        run(_draw_nls5(rng))
    for _ in range(200):
        run(_draw_co(rng))

    elapsed = time.time() - t0
    ok = worst_v <= 1e-6 and worst_o <= 1e-5 and elapsed <= 600
    report(acceptance_report, 1, ok,
           f"{total} systems, value gap <= {worst_v:.2e}, "
           f"orbit gap <= {worst_o:.2e}, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# Criterion 2: root structure of the phase equation on the circle


def test_criterion_2_trig_root_threshold(acceptance_report):
    err_rho = abs(sp.rho_star(math.pi / 2) - 2.0)
    assert err_rho <= 1e-10

    err_theta = 0.0
    for rho in (0.5, 1.0, 1.5):
        th0 = sp.solve_trig(rho, math.pi / 2).theta[0]
        err_theta = max(err_theta, abs(th0 - math.asin(rho / 2)))
    assert err_theta <= 1e-12

    checked = 0
    for tau in np.linspace(0.05, math.pi - 0.05, 50):
        tau = float(tau)
        rs = sp.rho_star(tau)
        rows = [(float(f) * rs, 4) for f in np.linspace(0.10, 0.97, 25)]
        rows.append((rs, 3))
        rows += [(float(f) * rs, 2) for f in np.linspace(1.03, 1.90, 24)]
        for rho, want in rows:
            at = sp.solve_trig(rho, tau)
            assert len(at.distinct) == want, (tau, rho, want)
            scan = sp.count_roots_scan(rho, tau)
            if want == 3:
                # A sign scan cannot certify the tangent root, so the
                # threshold row is checked by a residual certificate at
                # the merged root instead.
                assert at.merged, (tau, rho)
                th = at.theta[at.merged[0][0]]
                r1 = abs(math.sin(2 * th) + rho * math.sin(th - tau))
                r2 = abs(2 * math.cos(2 * th) + rho * math.cos(th - tau))
                assert r1 <= 1e-9, (tau, rho, r1)
                assert r2 <= 1e-6, (tau, rho, r2)
                assert scan in (2, 3, 4), (tau, rho, scan)
            else:
                assert scan == want, (tau, rho, want, scan)
            checked += 1

    ok = checked == 2500
    report(acceptance_report, 2, ok,
           f"rho_*(pi/2) err {err_rho:.1e}, theta0 err {err_theta:.1e}, "
           f"4/3/2 pattern at {checked} grid points")


# ---------------------------------------------------------------------------
# Criterion 3: scalar radial profiles


def test_criterion_3_scalar_profiles(acceptance_report):
    n = pf.solve_Q(1, 4.0).norms()
    closed = max(abs(n["l2_sq"] - 4.0),
                 abs(n["grad_sq"] - 4.0 / 3.0),
                 abs(n["p_int"] - 16.0 / 3.0))
    assert closed <= 1e-12

    worst_poho = worst_res = 0.0
    for d, p in ((2, 3.0), (2, 4.0), (3, 3.0), (3, 4.0)):
        q = pf.solve_Q(d, p)
        nn = q.norms()
        r1 = abs(nn["grad_sq"] + nn["l2_sq"] - nn["p_int"]) / nn["p_int"]
        lhs = (d - 2) / 2 * nn["grad_sq"] + d / 2 * nn["l2_sq"]
        r2 = abs(lhs - d / p * nn["p_int"]) / nn["p_int"]
        worst_poho = max(worst_poho, r1, r2)
        worst_res = max(worst_res, q.ode_residual())
    ok = worst_poho <= 1e-4 and worst_res <= 1e-5
    report(acceptance_report, 3, ok,
           f"closed-form err {closed:.1e}, Pohozaev <= {worst_poho:.1e}, "
           f"residual <= {worst_res:.1e}")


# ---------------------------------------------------------------------------
# Criterion 4: every tabulated bound state solves the stationary system


def _rep_systems():
    s = math.sqrt
    eta = 0.7
    rs = sp.rho_star(eta)
    t = min(0.3, 0.9 / math.hypot(1.0, rs))
    merge = sy.nls5(s(1 - t * t - (rs * t) ** 2), t, rs * t, eta, -4.0)
    return [
        sy.nls1(1, -1), sy.nls1(0, -1), sy.nls1(-1, -1),
        sy.nls2(1, 1, -1), sy.nls2(0, 0, -1), sy.nls2(-1, -1, -1),
        sy.nls2(1, -1, -1),
        sy.nls3(0.8, 0.6, -2.0), sy.nls3(-0.6, 0.8, 1.0),
        sy.nls3(-1.0, 0.0, 0.5),
        sy.nls4(0.05, 0.1, s(1 - 0.0025 - 0.01), 0.0),
        sy.nls4(0.6, 0.2, s(1 - 0.36 - 0.04), -1.0),
        sy.nls4(0.2, 0.6, s(1 - 0.04 - 0.36), 0.0),
        sy.nls5(0.3, 0.8, s(1 - 0.09 - 0.64), 0.7, -1.0),
        sy.nls5(0.8, 0.3, s(1 - 0.64 - 0.09), 0.7, -3.0),
        merge,
        sy.colin_ohta(0.7, 1.3), sy.colin_ohta(0.3, 0.5),
        sy.colin_ohta(sp.co_kappa_c(0.5), 0.5),
    ]


def test_criterion_4_bound_state_tables(acceptance_report):
    n_states = n_ground = 0
    worst_res = worst_k = worst_s = 0.0
    for system in _rep_systems():
        negs = [f for f in sp.critical_points(system) if f.value < 0]
        assert negs, system.describe()
        gmin = sp.gmin_analytic(system).value
        for f in negs:
            w1, w2 = complex(f.generator[0]), complex(f.generator[1])
            nw = math.hypot(abs(w1), abs(w2))
            chk = stt.verify_excited(system, (w1 / nw, w2 / nw), -f.value)
            assert chk.passed, (system.describe(), f.label, chk)
            want_ground = abs(f.value - gmin) <= 1e-8 * max(1.0, abs(gmin))
            assert chk.is_ground == want_ground, (system.describe(), f.label)
            worst_res = max(worst_res, chk.residual)
            n_states += 1
        grounds = stt.build_ground_states(system) if gmin < 0 else ()
        if grounds:
            amin = stt.action_min(system)
            for g in grounds:
                fn = g.functionals()
                worst_k = max(worst_k, abs(fn.K) / (2 * fn.H + 2 * fn.M))
                worst_s = max(worst_s, abs(fn.S - amin) / amin)
                n_ground += 1
    assert worst_k <= 1e-6 and worst_s <= 1e-6

    n_3d = 0
    for system in (sy.nls3(-0.6, 0.8, 1.0, d=3), sy.nls1(-1, -1, d=3),
                   sy.colin_ohta(2.0, 0.5, d=3)):
        for f in sp.critical_points(system):
            if f.value >= 0:
                continue
            w1, w2 = complex(f.generator[0]), complex(f.generator[1])
            nw = math.hypot(abs(w1), abs(w2))
            chk = stt.verify_excited(system, (w1 / nw, w2 / nw), -f.value)
            assert chk.passed, (system.describe(), f.label, chk)
            n_3d += 1
    ok = n_states >= 50 and n_ground >= 15 and n_3d >= 8
    report(acceptance_report, 4, ok,
           f"{n_states} line states (residual <= {worst_res:.1e}), "
           f"{n_ground} ground checks (K <= {worst_k:.1e}, "
           f"S gap <= {worst_s:.1e}), {n_3d} radial 3d states")


# ---------------------------------------------------------------------------
# Criterion 5: sharp vector interpolation inequality


GN_FACTORIES = (
    lambda d: sy.nls1(-1, -1, d=d),
    lambda d: sy.nls2(1, 1, -1, d=d),
    lambda d: sy.nls3(0.8, 0.6, -2.0, d=d),
    lambda d: sy.nls4(0.6, 0.2, math.sqrt(1 - 0.36 - 0.04), -1.0, d=d),
    lambda d: sy.nls5(0.3, 0.8, math.sqrt(1 - 0.09 - 0.64), 0.7, -1.0, d=d),
    lambda d: sy.colin_ohta(0.7, 1.3, d=d),
)


def test_criterion_5_interpolation_inequality(acceptance_report):
    total_fields = 0
    worst_gap = {1: 0.0, 2: 0.0}
    for d in (1, 2):
        for make in GN_FACTORIES:
            system = make(d)
            rep = stt.gn_check(system, n_fields=10000, seed=SEED)
            assert rep.violations == 0, (system.describe(), rep)
            gap_tol = 1e-6 if d == 1 else 1e-3
            assert rep.equality_gap <= gap_tol, (system.describe(), rep)
            worst_gap[d] = max(worst_gap[d], rep.equality_gap)
            total_fields += 10000
    ok = total_fields == 120000
    report(acceptance_report, 5, ok,
           f"0 violations over {total_fields} fields, equality gap "
           f"<= {worst_gap[1]:.1e} (1d) / {worst_gap[2]:.1e} (2d)")


# ---------------------------------------------------------------------------
# Criterion 6: two-parameter cubic family, minimiser regions and the
# critical coupling curve


def _co_regime(families):
    has_pole = any(abs(complex(f.generator[0])) < 1e-3 for f in families)
    has_int = any(abs(complex(f.generator[0])) >= 1e-3 for f in families)
    if has_pole and has_int:
        return "both"
    return "pole" if has_pole else "interior"


def test_criterion_6_cubic_family_regions(acceptance_report):
    grid_pts = spot = 0
    for i, gamma in enumerate(np.linspace(0.08, 2.5, 60)):
        gamma = float(gamma)
        if abs(gamma - 1.0) < 0.01:
            gamma += 0.011
        for j, kappa in enumerate(np.linspace(-0.5, 2.5, 60)):
            kappa = float(kappa)
            if gamma < 1.0 and abs(kappa - sp.co_kappa_c(gamma)) < 0.02:
                kappa += 0.025
            system = sy.colin_ohta(kappa, gamma)
            want = sp.co_trichotomy(kappa, gamma)
            got = _co_regime(sp.gmin_analytic(system).families)
            assert got == want, (kappa, gamma, got, want)
            if (i * 60 + j) % 16 == 0:
                num = sp.gmin_numeric(system)
                assert _co_regime(num.families) == want, (kappa, gamma)
                assert abs(num.value
                           - sp.gmin_analytic(system).value) <= 1e-6
                spot += 1
            grid_pts += 1

    worst_kc = 0.0
    for gamma in (0.3, 0.6, 0.9):
        kc = sp.co_kappa_c(gamma)

        def interior_minimises(kappa):
            fams = sp.gmin_numeric(sy.colin_ohta(kappa, gamma)).families
            return any(abs(complex(f.generator[0])) > 0.05 for f in fams)

        lo, hi = kc - 0.3, kc + 0.3
        assert not interior_minimises(lo) and interior_minimises(hi)
        for _ in range(25):
            mid = 0.5 * (lo + hi)
            if interior_minimises(mid):
                hi = mid
            else:
                lo = mid
        kc_num = 0.5 * (lo + hi)
        err = abs(kc_num - 0.5 * (gamma + 2) * math.sqrt(1 - gamma))
        worst_kc = max(worst_kc, err)
    ok = grid_pts == 3600 and worst_kc <= 1e-6
    report(acceptance_report, 6, ok,
           f"region map on {grid_pts} points ({spot} numeric spot checks), "
           f"critical coupling err <= {worst_kc:.1e}")


# ---------------------------------------------------------------------------
# Criterion 7: coefficient encoding and the two exact transformations


def test_criterion_7_encoding_and_transforms(acceptance_report):
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        lam = tuple(int(x) for x in rng.integers(-9, 10, size=12))
        back = sy.cv_to_lambdas(sy.lambdas_to_cv(lam))
        assert tuple(back) == lam

    F = Fraction
    standard = (
        ("NLS1", {"alpha": 1, "beta": -1}),
        ("NLS2", {"alpha": 1, "beta": 0, "sigma": -1}),
        ("NLS3", {"alpha1": F(4, 5), "alpha2": F(3, 5), "r": F(-2)}),
        ("NLS4", {"alpha1": F(3, 13), "alpha2": F(4, 13),
                  "alpha3": F(12, 13), "r": F(-1)}),
        ("NLS5", {"alpha1": 0.3, "alpha2": 0.8,
                  "alpha3": math.sqrt(1 - 0.09 - 0.64),
                  "eta": 0.7, "r": -1.0}),
    )
    for form, params in standard:
        lam = sy.standard_lambdas(form, params)
        assert sy.energy_criterion(sy.lambdas_to_cv(lam), (1, 0, 1)), form

    # Sign flip of the second mixing angle under the rotation by pi/4,
    # exact over the rationals up to a positive scale.
    lam = sy.standard_lambdas(
        "NLS3", {"alpha1": F(4, 5), "alpha2": F(3, 5), "r": F(-2)})
    out = sy.transform_lambdas(lam, ((1, -1), (1, 1)))
    want = sy.standard_lambdas(
        "NLS3", {"alpha1": F(4, 5), "alpha2": F(-3, 5), "r": F(-2)})
    q = next(F(o) / F(w) for o, w in zip(out, want) if w != 0)
    assert q > 0
    assert tuple(out) == tuple(q * F(w) for w in want)
    rt = 1 / math.sqrt(2)
    out_f = sy.transform_lambdas(lam, ((rt, -rt), (rt, rt)))
    assert max(abs(float(o) - float(w))
               for o, w in zip(out_f, want)) <= 1e-12

    # Independent phase rotation of the second component, exact.
    flipped = sy.diagonal_phase_transform(sy.nls3(-1, 0, F(1, 2)))
    want_b = sy.standard_lambdas(
        "NLS3", {"alpha1": F(1, 2), "alpha2": F(-1, 2), "r": F(1, 2) - 4})
    assert tuple(flipped.lambdas) == tuple(want_b)

    report(acceptance_report, 7, True,
           "100 exact round trips, energy criterion on 5 standard forms, "
           "both transformations exact")


# ---------------------------------------------------------------------------
# Criterion 8: the four PDE experiments


def test_criterion_8_pde_experiments(acceptance_report):
    t0 = time.time()
    sol = dyn.soliton_experiment(sy.nls3(0.8, 0.6, -2.0), T=10.0)
    assert sol.info["sup_error"] <= 1e-5, sol.info
    assert sol.info["mass_drift"] <= 1e-8, sol.info
    assert sol.info["energy_drift"] <= 1e-7, sol.info

    stab = dyn.stability_experiment(sy.nls2(1, 1, -1), eps=0.01, T=50.0)
    assert stab.info["max_relative_dist"] <= 5 * 0.01, stab.info

    blow = dyn.blowup_experiment(sy.nls1(-1, -1, d=2))
    assert blow.info["signature"], blow.info
    assert blow.info["v_always_negative"], blow.info

    t_pc = time.time()
    pc = dyn.pseudoconformal_experiment()
    pc_time = time.time() - t_pc
    assert pc.info["max_rel_H_error"] <= 1e-3, pc.info
    assert pc_time <= 900

    elapsed = time.time() - t0
    report(acceptance_report, 8, True,
           f"soliton err {sol.info['sup_error']:.1e}, orbit dist "
           f"{stab.info['max_relative_dist']:.3f} (<= 5 eps), blowup "
           f"signature ok, H err {pc.info['max_rel_H_error']:.1e}, "
           f"{elapsed:.0f}s")


# ---------------------------------------------------------------------------
# Criterion 9: localised virial identity along a real trajectory


def test_criterion_9_virial_identity(acceptance_report):
    system = sy.nls1(-1, -1, d=2)
    grid = dyn.Grid((256, 256), (24.0, 24.0))
    vs = stt.build_ground_states(system)[0]
    base = dyn.standing_wave_solution(vs, grid, 0.0)
    state = dyn.GridState(grid, (1.05 * base.u[0], 1.05 * base.u[1]))
    R, dt = 6.0, 1e-3
    stepper = dyn.Stepper(system, grid, dt)

    samples = [50 * (i + 1) for i in range(20)]
    needed = set()
    for k in samples:
        needed.update((k - 1, k, k + 1))
    J = {}
    rhs = {}
    for k in range(1, samples[-1] + 2):
        state = stepper(state)
        if k in needed:
            J[k], rhs[k] = dyn.localized_virial(state, system, R)

    worst = 0.0
    for k in samples:
        fd = (J[k + 1] - J[k - 1]) / (2 * dt)
        worst = max(worst, abs(fd - rhs[k]) / abs(rhs[k]))
    ok = worst <= 1e-3
    report(acceptance_report, 9, ok,
           f"dJ/dt matches the identity at {len(samples)} times, "
           f"relative err <= {worst:.1e}")
