"""Minimisation and critical structure of g on the unit sphere.

The nonlinearity restricted to unit vectors, modulo the gauge action,
lives on a two-parameter chart (nu, zeta) with z = (cos nu, e^{i zeta}
sin nu).  This module locates critical orbit families two independent
ways: closed-form case tables for the named standard forms, and a dense
grid search with local polishing that never consults those tables.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .systems import System, eval_g

TWO_PI = 2.0 * math.pi

ORBIT_KINDS = ("point", "phase_circle", "real_circle", "full_sphere")


@dataclass(frozen=True)
class OrbitFamily:
    """A gauge orbit (or continuum of orbits) of critical points.

    kind "point" is a single orbit; "phase_circle" is a circle of orbits
    obtained by varying the relative phase at fixed moduli; "real_circle"
    is the circle of real unit vectors; "full_sphere" marks a constant g.
    The generator is one representative unit vector.
    """

    kind: str
    generator: tuple
    value: float
    label: str = ""

    def __post_init__(self):
        if self.kind not in ORBIT_KINDS:
            raise ValueError(f"unknown orbit kind {self.kind!r}")

    def chart(self, n=(1, 1)) -> tuple[float, float]:
        """Chart coordinates (nu, zeta) of the generator."""
        z1, z2 = complex(self.generator[0]), complex(self.generator[1])
        nu = math.atan2(abs(z2), abs(z1))
        if abs(z1) < 1e-12 or abs(z2) < 1e-12:
            return nu, 0.0
        inv = (z2 ** n[0]) * (z1.conjugate() ** n[1])
        return nu, cmath.phase(inv) % TWO_PI


@dataclass(frozen=True)
class SphereMin:
    value: float
    families: tuple
    method: str


def orbit_distance(z, w, n=(1, 1)) -> float:
    """Distance between the gauge orbits of two unit vectors."""
    z1, z2 = complex(z[0]), complex(z[1])
    w1, w2 = complex(w[0]), complex(w[1])
    nz = math.hypot(abs(z1), abs(z2))
    nw = math.hypot(abs(w1), abs(w2))
    if nz == 0 or nw == 0:
        raise ValueError("orbit_distance needs nonzero vectors")
    z1, z2 = z1 / nz, z2 / nz
    w1, w2 = w1 / nw, w2 / nw
    c1 = z1 * w1.conjugate()
    c2 = z2 * w2.conjugate()
    if n[0] == n[1]:
        return math.sqrt(max(0.0, 2.0 - 2.0 * abs(c1 + c2)))

    def f(theta):
        return 2.0 - 2.0 * (c1 * cmath.exp(-1j * n[0] * theta)
                            + c2 * cmath.exp(-1j * n[1] * theta)).real

    grid = np.linspace(0.0, TWO_PI, 256, endpoint=False)
    vals = [f(t) for t in grid]
    i = int(np.argmin(vals))
    step = TWO_PI / 256
    res = optimize.minimize_scalar(
        f, bounds=(grid[i] - step, grid[i] + step), method="bounded",
        options={"xatol": 1e-12})
    return math.sqrt(max(0.0, min(res.fun, vals[i])))


# ---------------------------------------------------------------------------
# Chart evaluation


def _chart_terms(system: System):
    """Fourier structure of h(nu, zeta) in the relative phase.

    Returns a function mapping arrays (c, s) = (cos nu, sin nu) to the
    coefficient arrays (A, B, C) with h = A + B cos zeta + C cos 2 zeta.
    """
    if system.kind == "lambda":
        lam = [float(v) for v in system.lambdas]
        q = lam[3] + lam[7]
        b1 = lam[1] + lam[2] + lam[6]
        b2 = lam[5] + lam[9] + lam[10]
        c0 = lam[4] + lam[8]

        def terms(c, s):
            c2, s2 = c * c, s * s
            A = lam[0] * c2 * c2 + lam[11] * s2 * s2 + q * c2 * s2
            B = b1 * c2 * c * s + b2 * c * s2 * s
            C = c0 * c2 * s2
            return A, B, C

        return terms
    if system.kind == "co":
        kap = system.params["kappa"]
        gam = system.params["gamma"]

        def terms(c, s):
            # abs keeps the chart exact for nu outside [0, pi/2] too,
            # where local searches may wander.
            A = -kap * np.abs(c) ** 3 - np.abs(s) ** 3
            B = -1.5 * gam * c * c * s
            C = np.zeros_like(np.asarray(A, dtype=float))
            return A, B, C

        return terms
    return None


def chart_value(system: System, nu, zeta):
    """g on the sphere in chart coordinates."""
    nu = np.asarray(nu, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    terms = _chart_terms(system)
    if terms is not None:
        A, B, C = terms(np.cos(nu), np.sin(nu))
        return A + B * np.cos(zeta) + C * np.cos(2 * zeta)
    if system.n[0] != 1:
        raise ValueError("chart requires first gauge weight equal to 1")
    z1 = np.cos(nu) + 0j
    z2 = np.sin(nu) * np.exp(1j * zeta)
    return eval_g(system, (z1, z2))


def _chart_gradient(system: System, nu: float, zeta: float):
    """Analytic chart gradient for coefficient and resonance systems."""
    c, s = math.cos(nu), math.sin(nu)
    cz, sz = math.cos(zeta), math.sin(zeta)
    c2z, s2z = math.cos(2 * zeta), math.sin(2 * zeta)
    if system.kind == "lambda":
        lam = [float(v) for v in system.lambdas]
        q = lam[3] + lam[7]
        b1 = lam[1] + lam[2] + lam[6]
        b2 = lam[5] + lam[9] + lam[10]
        c0 = lam[4] + lam[8]
        B = b1 * c ** 3 * s + b2 * c * s ** 3
        C = c0 * c * c * s * s
        dA = (-4 * lam[0] * c ** 3 * s + 4 * lam[11] * s ** 3 * c
              + q * 2 * c * s * (c * c - s * s))
        dB = b1 * (c ** 4 - 3 * c * c * s * s) + b2 * (3 * c * c * s * s - s ** 4)
        dC = c0 * 2 * c * s * (c * c - s * s)
        dnu = dA + dB * cz + dC * c2z
        dzeta = -B * sz - 2 * C * s2z
        return dnu, dzeta
    if system.kind == "co":
        kap = system.params["kappa"]
        gam = system.params["gamma"]
        B = -1.5 * gam * c * c * s
        dA = 3 * kap * c * abs(c) * s - 3 * s * abs(s) * c
        dB = -1.5 * gam * (c ** 3 - 2 * c * s * s)
        return dA + dB * cz, -B * sz
    raise ValueError("analytic chart gradient needs a coefficient system")


# ---------------------------------------------------------------------------
# Root structure of sin(2 theta) + rho sin(theta - tau)


@dataclass(frozen=True)
class TrigRoots:
    """Labelled roots of sin(2 theta) + rho sin(theta - tau) on [0, 2 pi).

    Labels follow the four branches that start from theta_j = j pi / 2 at
    rho = 0.  When two (or three) branches have merged into a multiple
    root the shared angle appears once in `theta` under each label and
    the groups are listed in `merged`.
    """

    rho: float
    tau: float
    theta: dict
    merged: tuple

    @property
    def distinct(self) -> tuple:
        out = []
        for j in sorted(self.theta):
            t = self.theta[j]
            if not any(abs(t - u) < 1e-9 for u in out):
                out.append(t)
        return tuple(out)


def _trig_f(theta, rho, tau):
    return np.sin(2 * theta) + rho * np.sin(theta - tau)


def _trig_fp(theta, rho, tau):
    return 2 * np.cos(2 * theta) + rho * np.cos(theta - tau)


def solve_trig(rho: float, tau: float) -> TrigRoots:
    """All roots of sin(2 theta) + rho sin(theta - tau) = 0, labelled."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if not 0 < tau < math.pi:
        raise ValueError("tau must lie in (0, pi)")
    if rho == 0:
        theta = {j: j * math.pi / 2 for j in range(4)}
        return TrigRoots(rho=rho, tau=tau, theta=theta, merged=())

    ct, st = math.cos(tau), math.sin(tau)
    # Eliminating sin theta gives a quartic in c = cos theta.
    coeffs = [4.0, 4.0 * rho * ct, rho * rho - 4.0, -4.0 * rho * ct,
              -rho * rho * ct * ct]
    roots = np.roots(coeffs)
    cands = []
    for rt in roots:
        if abs(rt.imag) > 1e-7:
            continue
        c = min(1.0, max(-1.0, float(rt.real)))
        s0 = math.sqrt(max(0.0, 1.0 - c * c))
        for s in (s0, -s0):
            cands.append(math.atan2(s, c) % TWO_PI)
    polished = []
    for th in cands:
        x = th
        for _ in range(60):
            f = float(_trig_f(x, rho, tau))
            if abs(f) < 1e-15:
                break
            fp = float(_trig_fp(x, rho, tau))
            if abs(fp) < 1e-9:
                break
            x -= f / fp
        if abs(float(_trig_f(x, rho, tau))) < 1e-9:
            polished.append(x % TWO_PI)
    polished.sort()
    distinct = []
    for x in polished:
        if not distinct or min(abs(x - u) % TWO_PI for u in distinct) > 1e-7:
            if not any(abs(x - u) < 1e-7 or abs(abs(x - u) - TWO_PI) < 1e-7
                       for u in distinct):
                distinct.append(x)

    theta: dict = {}
    merged: list = []
    half = math.pi / 2
    near_half_tau = abs(tau - half) < 1e-13
    if near_half_tau:
        lower = sorted(t for t in distinct if t < math.pi - 1e-9)
        upper = [t for t in distinct if t >= math.pi - 1e-9]
        if rho < 2 - 1e-13:
            # arcsin(rho/2), pi/2, pi - arcsin(rho/2) and 3 pi/2.
            for j, t in enumerate(lower):
                theta[j] = t
        else:
            theta[1] = lower[0] if lower else half
            if rho <= 2 + 1e-13:
                theta[0] = theta[2] = theta[1]
                merged.append((0, 1, 2))
        theta[3] = upper[0] if upper else 1.5 * math.pi
        return TrigRoots(rho=rho, tau=tau, theta=theta,
                         merged=tuple(merged))

    if tau < half:
        first = [t for t in distinct if t < half]
        mid = [t for t in distinct if half <= t <= math.pi + 1e-12]
        last = [t for t in distinct if t > math.pi + 1e-12]
        if first:
            theta[0] = first[0]
        if len(mid) >= 2:
            theta[1], theta[2] = mid[0], mid[-1]
        elif len(mid) == 1:
            theta[1] = theta[2] = mid[0]
            merged.append((1, 2))
        if last:
            theta[3] = last[-1] if len(last) == 1 else last[0]
    else:
        first = [t for t in distinct if t <= half + 1e-12]
        mid = [t for t in distinct if half + 1e-12 < t <= math.pi + 1e-12]
        last = [t for t in distinct if t > math.pi + 1e-12]
        if len(first) >= 2:
            theta[0], theta[1] = first[0], first[-1]
        elif len(first) == 1:
            theta[0] = theta[1] = first[0]
            merged.append((0, 1))
        if mid:
            theta[2] = mid[0]
        if last:
            theta[3] = last[0]
    return TrigRoots(rho=rho, tau=tau, theta=theta, merged=tuple(merged))


def count_roots_scan(rho: float, tau: float, m: int = 20000) -> int:
    """Root count by dense sign scan; used as an independent oracle."""
    th = np.linspace(0.0, TWO_PI, m, endpoint=False)
    f = _trig_f(th, rho, tau)
    f = np.where(f == 0.0, 1e-300, f)
    wrapped = np.append(f, f[0])
    return int(np.sum(np.sign(wrapped[1:]) != np.sign(wrapped[:-1])))


def _merge_bin(tau: float) -> tuple[float, float]:
    half = math.pi / 2
    if tau < half:
        return half, math.pi
    return 0.0, half


def rho_star(tau: float) -> float:
    """Threshold rho at which the two merging root branches disappear."""
    if not 0 < tau < math.pi:
        raise ValueError("tau must lie in (0, pi)")
    half = math.pi / 2
    if abs(tau - half) < 1e-13:
        return 2.0
    a, b = _merge_bin(tau)
    th = np.linspace(a, b, 2001)

    def pair_count(rho):
        f = _trig_f(th, rho, tau)
        f = np.where(f == 0.0, 1e-300, f)
        return int(np.sum(np.sign(f[1:]) != np.sign(f[:-1])))

    lo, hi = 1e-8, 8.0
    while pair_count(hi) >= 2:
        hi *= 2
        if hi > 1024:
            raise RuntimeError("failed to bracket the merge threshold")
    if pair_count(lo) < 2:
        raise RuntimeError("no merging pair at small rho")
    for _ in range(40):
        midp = 0.5 * (lo + hi)
        if pair_count(midp) >= 2:
            lo = midp
        else:
            hi = midp
    rho0 = 0.5 * (lo + hi)
    f = np.abs(_trig_f(th, lo, tau))
    th0 = float(th[int(np.argmin(f))])
    x = np.array([th0, rho0])
    for _ in range(60):
        t, r = x
        F = np.array([float(_trig_f(t, r, tau)), float(_trig_fp(t, r, tau))])
        J = np.array([
            [float(_trig_fp(t, r, tau)), math.sin(t - tau)],
            [-4 * math.sin(2 * t) - r * math.sin(t - tau), math.cos(t - tau)],
        ])
        try:
            dx = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        x = x - dx
        if float(np.max(np.abs(dx))) < 1e-14:
            break
    t, r = x
    if not (a - 1e-6 <= t <= b + 1e-6) or not 0 < r < 2048:
        raise RuntimeError("merge refinement left its bracket")
    return float(r)


# ---------------------------------------------------------------------------
# Analytic case tables


def _pole1(value, label="first-component pole"):
    return OrbitFamily("point", (1.0 + 0j, 0j), float(value), label)


def _pole2(value, label="second-component pole"):
    return OrbitFamily("point", (0j, 1.0 + 0j), float(value), label)


def _families_nls1(alpha, beta, sigma=0):
    """Shared case table for the decoupled form and its isotropic shift."""
    shift = sigma
    if alpha == 0 and beta == 0:
        return (float(shift),
                (OrbitFamily("full_sphere", (1.0 + 0j, 0j), float(shift),
                             "entire sphere"),))
    if beta > 0:
        # alpha >= beta forces alpha = beta = 1.
        val = alpha * beta / (alpha + beta) + shift
        r = 1 / math.sqrt(2)
        fam = OrbitFamily("phase_circle", (r + 0j, r + 0j), float(val),
                          "free-phase circle")
        return float(val), (fam,)
    val = beta + shift
    fams = [_pole2(val)]
    if alpha == beta:
        fams.insert(0, _pole1(val))
    return float(val), tuple(fams)


def _analytic_nls3(params):
    a1, a2, r = params["alpha1"], params["alpha2"], params["r"]
    g_poles = 3 * a1 + a2 + r
    g_real = 3 * a1 - a2 + r
    g_imag = 2 * a1 + r
    rt = 1 / math.sqrt(2)
    if a2 == 0 and a1 < 0:
        fam = OrbitFamily("real_circle", (rt + 0j, rt + 0j),
                          float(3 * a1 + r), "real circle")
        return float(3 * a1 + r), (fam,)
    if a1 > a2:
        fams = (
            OrbitFamily("point", (rt + 0j, 1j * rt), float(g_imag),
                        "balanced imaginary pair (+)"),
            OrbitFamily("point", (rt + 0j, -1j * rt), float(g_imag),
                        "balanced imaginary pair (-)"),
        )
        return float(g_imag), fams
    fams = (
        OrbitFamily("point", (rt + 0j, rt + 0j), float(g_real),
                    "balanced real pair (+)"),
        OrbitFamily("point", (rt + 0j, -rt + 0j), float(g_real),
                    "balanced real pair (-)"),
    )
    return float(g_real), fams


def _nls4_mixed_real(a1, a2, a3, r):
    value = -a3 * a3 / (2 * a2) + 3 * a1 - a2 + r
    w1 = math.sqrt((2 * a2 - a3) / (4 * a2))
    w2 = math.sqrt((2 * a2 + a3) / (4 * a2))
    return value, w1, w2


def _nls4_mixed_imag(a1, a2, a3, r):
    ap = a1 + a2
    value = -a3 * a3 / ap + 2 * a1 + r
    w1 = math.sqrt((ap - a3) / (2 * ap))
    w2 = math.sqrt((ap + a3) / (2 * ap))
    return value, w1, w2


def _analytic_nls4(params):
    a1, a2, a3 = params["alpha1"], params["alpha2"], params["alpha3"]
    r = params["r"]
    abar = max(a1 + a2, 2 * a2)
    if a3 >= abar:
        value = 3 * a1 + a2 - 2 * a3 + r
        return float(value), (_pole2(value),)
    if a1 < a2:
        value, w1, w2 = _nls4_mixed_real(a1, a2, a3, r)
        fams = tuple(
            OrbitFamily("point", (w1 + 0j, sg * w2 + 0j), float(value),
                        f"mixed real pair ({'+' if sg > 0 else '-'})")
            for sg in (1, -1))
        return float(value), fams
    value, w1, w2 = _nls4_mixed_imag(a1, a2, a3, r)
    fams = tuple(
        OrbitFamily("point", (w1 + 0j, 1j * sg * w2), float(value),
                    f"mixed imaginary pair ({'+' if sg > 0 else '-'})")
        for sg in (1, -1))
    return float(value), fams


def _nls5_root_families(params, roots: TrigRoots):
    a1, a2, a3 = params["alpha1"], params["alpha2"], params["alpha3"]
    eta, r = params["eta"], params["r"]
    fams = {}
    for j, th in roots.theta.items():
        value = (a2 * math.cos(2 * th) + 2 * a3 * math.cos(th - eta)
                 + 3 * a1 + r)
        gen = (math.cos(th / 2) + 0j, math.sin(th / 2) + 0j)
        fams[j] = OrbitFamily("point", gen, float(value),
                              f"real-chart root {j}")
    return fams


def _nls5_complex_pair(params):
    """The genuinely complex critical pair, when admissible."""
    a1, a2, a3 = params["alpha1"], params["alpha2"], params["alpha3"]
    eta, r = params["eta"], params["r"]
    if a1 == a2:
        return None
    D = a1 * a1 + a2 * a2 - 2 * a1 * a2 * math.cos(2 * eta)
    if D <= 0:
        return None
    bound = (a1 + a2) ** 2 * (a1 - a2) ** 2 / D
    if a3 * a3 > bound:
        return None
    value = (-a3 * a3 * (a1 - a2 * math.cos(2 * eta)) / (a1 * a1 - a2 * a2)
             + 2 * a1 + r)
    ap = a1 + a2
    num = ap - a3 * math.cos(eta)
    if num <= 0 or ap == 0:
        return None
    inner = 1.0 - a3 * a3 * D / (ap * ap * (a1 - a2) ** 2)
    inner = max(0.0, inner)
    fams = []
    for sg in (1, -1):
        w1 = sg * math.sqrt(num / (2 * ap))
        w2 = math.sqrt(ap / (2 * num)) * (
            -sg * a3 * math.sin(eta) / (a1 - a2) + 1j * math.sqrt(inner))
        fams.append(OrbitFamily(
            "point", (w1 + 0j, w2), float(value),
            f"complex pair ({'+' if sg > 0 else '-'})"))
    return float(value), tuple(fams)


def _analytic_nls5(params):
    a1, a2 = params["alpha1"], params["alpha2"]
    roots = solve_trig(params["alpha3"] / a2, params["eta"])
    fams = _nls5_root_families(params, roots)
    pair = _nls5_complex_pair(params)
    strict = False
    if pair is not None:
        a3 = params["alpha3"]
        eta = params["eta"]
        D = a1 * a1 + a2 * a2 - 2 * a1 * a2 * math.cos(2 * eta)
        bound = (a1 + a2) ** 2 * (a1 - a2) ** 2 / D
        strict = a3 * a3 < bound * (1 - 1e-15)
    if a1 > a2 and pair is not None and strict:
        return pair
    fam = fams[3]
    return fam.value, (fam,)


def co_kappa_c(gamma: float) -> float:
    """Coupling threshold separating the pole and interior minimisers."""
    if not 0 < gamma <= 1:
        raise ValueError("the threshold is defined for gamma in (0, 1]")
    return 0.5 * (gamma + 2) * math.sqrt(1 - gamma)


def _co_in_phase(kappa, gamma, branch):
    """Interior in-phase critical data (b, nu, value) or None."""
    disc = kappa * kappa + 2 * gamma * (gamma - 1)
    if disc < 0:
        return None
    root = math.sqrt(disc)
    b = kappa + root if branch == 0 else kappa - root
    if b <= 0:
        return None
    nu = math.atan2(gamma, b)
    value = -0.5 * (b * b + 2 * gamma) / math.hypot(gamma, b)
    return b, nu, value


def co_critical_points(kappa: float, gamma: float):
    """All critical orbit families of the resonance-model sphere problem."""
    fams = [_pole2(-1.0)]
    deep = _co_in_phase(kappa, gamma, 0)
    if deep is not None:
        b, nu, value = deep
        fams.append(OrbitFamily(
            "point", (math.cos(nu) + 0j, math.sin(nu) + 0j), float(value),
            "in-phase interior (deep)"))
    shallow = _co_in_phase(kappa, gamma, 1)
    if shallow is not None and gamma < 1:
        b, nu, value = shallow
        fams.append(OrbitFamily(
            "point", (math.cos(nu) + 0j, math.sin(nu) + 0j), float(value),
            "in-phase interior (shallow)"))
    if kappa > gamma ** 1.5 / math.sqrt(2):
        b2 = math.sqrt(kappa * kappa + 2 * gamma * (gamma + 1)) - kappa
        nu3 = math.atan2(gamma, b2)
        value = 0.5 * (b2 * b2 - 2 * gamma) / math.hypot(gamma, b2)
        fams.append(OrbitFamily(
            "point", (math.cos(nu3) + 0j, -math.sin(nu3) + 0j), float(value),
            "opposite-phase interior"))
    return tuple(fams)


def _analytic_co(params):
    kappa, gamma = params["kappa"], params["gamma"]
    pole = _pole2(-1.0)
    deep = _co_in_phase(kappa, gamma, 0)
    if deep is None:
        return -1.0, (pole,)
    b, nu, value = deep
    fam = OrbitFamily("point", (math.cos(nu) + 0j, math.sin(nu) + 0j),
                      float(value), "in-phase interior (deep)")
    if value < -1.0 - 1e-13:
        return float(value), (fam,)
    if abs(value + 1.0) <= 1e-13:
        return -1.0, (pole, fam)
    return -1.0, (pole,)


def co_trichotomy(kappa: float, gamma: float) -> str:
    """Ground-set regime: "interior", "pole", or "both" at the threshold."""
    if gamma > 1:
        return "interior"
    if gamma == 1:
        return "interior" if kappa > 0 else "pole"
    kc = co_kappa_c(gamma)
    if kappa > kc:
        return "interior"
    if kappa == kc:
        return "both"
    return "pole"


def gmin_analytic(system: System) -> SphereMin:
    """Sphere minimum and minimising orbit families from the case tables."""
    if system.form is None:
        raise ValueError("closed-form tables cover the named forms only")
    p = system.params
    if system.form == "NLS1":
        value, fams = _families_nls1(p["alpha"], p["beta"])
    elif system.form == "NLS2":
        value, fams = _families_nls1(p["alpha"], p["beta"], p["sigma"])
    elif system.form == "NLS3":
        value, fams = _analytic_nls3(p)
    elif system.form == "NLS4":
        value, fams = _analytic_nls4(p)
    elif system.form == "NLS5":
        value, fams = _analytic_nls5(p)
    elif system.form == "CO":
        value, fams = _analytic_co(p)
    else:
        raise ValueError(f"no case table for form {system.form!r}")
    return SphereMin(value=float(value), families=tuple(fams),
                     method="analytic")


def critical_points(system: System):
    """All known critical orbit families (not only minimisers)."""
    if system.form is None:
        return _numeric_critical_points(system)
    p = system.params
    if system.form in ("NLS1", "NLS2"):
        alpha, beta = p["alpha"], p["beta"]
        shift = p.get("sigma", 0)
        if alpha == 0 and beta == 0:
            return (OrbitFamily("full_sphere", (1.0 + 0j, 0j), float(shift),
                                "entire sphere"),)
        fams = [_pole1(alpha + shift), _pole2(beta + shift)]
        if alpha * beta > 0:
            val = alpha * beta / (alpha + beta) + shift
            nu = math.atan(math.sqrt(alpha / beta))
            fams.append(OrbitFamily(
                "phase_circle", (math.cos(nu) + 0j, math.sin(nu) + 0j),
                float(val), "free-phase circle"))
        return tuple(fams)
    if system.form == "NLS3":
        a1, a2, r = p["alpha1"], p["alpha2"], p["r"]
        rt = 1 / math.sqrt(2)
        if a2 == 0:
            return (
                OrbitFamily("real_circle", (rt + 0j, rt + 0j),
                            float(3 * a1 + r), "real circle"),
                OrbitFamily("point", (rt + 0j, 1j * rt), float(2 * a1 + r),
                            "balanced imaginary pair (+)"),
                OrbitFamily("point", (rt + 0j, -1j * rt), float(2 * a1 + r),
                            "balanced imaginary pair (-)"),
            )
        fams = [
            _pole1(3 * a1 + a2 + r), _pole2(3 * a1 + a2 + r),
            OrbitFamily("point", (rt + 0j, rt + 0j), float(3 * a1 - a2 + r),
                        "balanced real pair (+)"),
            OrbitFamily("point", (rt + 0j, -rt + 0j), float(3 * a1 - a2 + r),
                        "balanced real pair (-)"),
            OrbitFamily("point", (rt + 0j, 1j * rt), float(2 * a1 + r),
                        "balanced imaginary pair (+)"),
            OrbitFamily("point", (rt + 0j, -1j * rt), float(2 * a1 + r),
                        "balanced imaginary pair (-)"),
        ]
        return tuple(fams)
    if system.form == "NLS4":
        a1, a2, a3, r = p["alpha1"], p["alpha2"], p["alpha3"], p["r"]
        fams = [
            _pole1(3 * a1 + a2 + 2 * a3 + r),
            _pole2(3 * a1 + a2 - 2 * a3 + r),
        ]
        if a2 > 0 and a3 <= 2 * a2:
            value, w1, w2 = _nls4_mixed_real(a1, a2, a3, r)
            for sg in (1, -1):
                fams.append(OrbitFamily(
                    "point", (w1 + 0j, sg * w2 + 0j), float(value),
                    f"mixed real pair ({'+' if sg > 0 else '-'})"))
        if a1 + a2 != 0 and a3 <= abs(a1 + a2):
            value, w1, w2 = _nls4_mixed_imag(a1, a2, a3, r)
            for sg in (1, -1):
                fams.append(OrbitFamily(
                    "point", (w1 + 0j, 1j * sg * w2), float(value),
                    f"mixed imaginary pair ({'+' if sg > 0 else '-'})"))
        return tuple(fams)
    if system.form == "NLS5":
        roots = solve_trig(p["alpha3"] / p["alpha2"], p["eta"])
        fams = list(_nls5_root_families(p, roots).values())
        pair = _nls5_complex_pair(p)
        if pair is not None:
            fams.extend(pair[1])
        return tuple(fams)
    if system.form == "CO":
        return co_critical_points(p["kappa"], p["gamma"])
    raise ValueError(f"no critical-point table for form {system.form!r}")


# ---------------------------------------------------------------------------
# Numeric minimisation (independent of the case tables)


def _canonical_generator(nu: float, zeta: float, n=(1, 1)):
    nu = math.fmod(nu, TWO_PI)
    if nu < 0:
        nu, zeta = -nu, zeta + math.pi
    if nu >= math.pi:
        nu, zeta = TWO_PI - nu, zeta + math.pi
    if nu > math.pi / 2:
        # fold by the gauge rotation at angle pi; it shifts the relative
        # phase by n2 * pi
        nu, zeta = math.pi - nu, zeta + n[1] * math.pi
    zeta %= TWO_PI
    if nu < 1e-8:
        return (1.0 + 0j, 0j)
    if nu > math.pi / 2 - 1e-8:
        return (0j, 1.0 + 0j)
    return (math.cos(nu) + 0j, math.sin(nu) * cmath.exp(1j * zeta))


def gmin_numeric(system: System, n_nu: int = 1024, n_zeta: int = 1024,
                 n_starts: int = 32, keep_tol: float = 1e-7,
                 cluster_tol: float = 1e-4) -> SphereMin:
    """Sphere minimum by dense grid search plus local polishing.

    Detects the degenerate minimising sets (whole sphere, free-phase
    circles, the real circle) from the grid before clustering isolated
    orbits.  Deterministic: no randomness is used.
    """
    if system.kind == "custom" and system.n[0] != 1:
        raise ValueError("numeric sphere search requires first weight 1")
    nu = np.linspace(0.0, math.pi / 2, n_nu + 1)
    zeta = np.linspace(0.0, TWO_PI, n_zeta, endpoint=False)
    terms = _chart_terms(system)
    if terms is not None:
        A, B, C = terms(np.cos(nu), np.sin(nu))
        H = (A[:, None] + np.outer(B, np.cos(zeta))
             + np.outer(C, np.cos(2 * zeta)))
    else:
        Z1 = np.cos(nu)[:, None] * np.ones_like(zeta)[None, :]
        Z2 = np.sin(nu)[:, None] * np.exp(1j * zeta)[None, :]
        H = np.asarray(eval_g(system, (Z1 + 0j, Z2)), dtype=float)
    hmin = float(H.min())
    hmax = float(H.max())
    scale = max(1.0, abs(hmin), abs(hmax))
    if hmax - hmin <= 1e-11 * scale:
        fam = OrbitFamily("full_sphere", (1.0 + 0j, 0j), hmin,
                          "entire sphere")
        return SphereMin(value=hmin, families=(fam,), method="numeric")

    def h(x):
        return float(chart_value(system, x[0], x[1]))

    flat = H.ravel()
    k = min(flat.size, 8000)
    idx = np.argpartition(flat, k - 1)[:k]
    idx = idx[np.argsort(flat[idx])]
    cand = []
    for fi in idx:
        inu, izeta = divmod(int(fi), n_zeta)
        x, z = float(nu[inu]), float(zeta[izeta])
        sep = True
        for (xn, zn) in cand:
            dz = abs(z - zn) % TWO_PI
            dz = min(dz, TWO_PI - dz) * max(math.sin(0.5 * (x + xn)), 0.05)
            if math.hypot(x - xn, dz) < 0.04:
                sep = False
                break
        if sep:
            cand.append((x, z))
        if len(cand) >= n_starts:
            break
    cand.append((0.0, 0.0))
    cand.append((math.pi / 2, 0.0))

    polished = []
    for x0 in cand:
        res = optimize.minimize(
            h, np.array(x0), method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 600,
                     "initial_simplex": np.array(
                         [x0, (x0[0] + 0.01, x0[1]), (x0[0], x0[1] + 0.01)])})
        v, x, z = float(res.fun), float(res.x[0]), float(res.x[1])
        # The chart is quartically flat around a pole minimum, so the
        # polish can stall a hair away from it; snap onto the pole
        # whenever that does not raise the value.
        for xp in (0.0, math.pi / 2):
            if abs(x - xp) < 3e-4 and h((xp, 0.0)) <= v + 1e-11 * scale:
                v, x, z = h((xp, 0.0)), xp, 0.0
                break
        polished.append((v, x, z))
    gmin = min(v for v, _, _ in polished)
    tol = keep_tol * max(1.0, abs(gmin))
    kept = [(v, x, z) for v, x, z in polished if v <= gmin + tol]

    # Degenerate minimising sets show up as long level sets on the grid.
    # Rows adjacent to a pole are excluded: there the chart is quartically
    # flat around a pole minimum and would mimic a circle of orbits.
    mask = H <= gmin + 1e-9 * max(1.0, abs(gmin))
    band = 6
    inner = mask[1 + band:-1 - band, :]
    count = int(inner.sum()) + int(mask[0].any()) + int(mask[-1].any())
    if count > 100:
        ii, jj = np.nonzero(inner)
        if ii.size:
            span_nu = ii.max() - ii.min()
            zeta_cover = np.unique(jj).size
            if span_nu <= 3 and zeta_cover > n_zeta // 2:
                nu_bar = float(nu[1 + band:-1 - band][ii].mean())
                res = optimize.minimize_scalar(
                    lambda x: h((x, 0.0)),
                    bounds=(max(0.0, nu_bar - 0.01),
                            min(math.pi / 2, nu_bar + 0.01)),
                    method="bounded", options={"xatol": 1e-12})
                nu_bar = float(res.x)
                fam = OrbitFamily(
                    "phase_circle",
                    (math.cos(nu_bar) + 0j, math.sin(nu_bar) + 0j),
                    gmin, "free-phase circle")
                return SphereMin(value=gmin, families=(fam,),
                                 method="numeric")
            on_axis = np.isin(jj, (0, n_zeta // 2,
                                   1, n_zeta - 1,
                                   n_zeta // 2 - 1, n_zeta // 2 + 1))
            if on_axis.all() and np.unique(ii).size > (n_nu - 2 * band) // 2:
                rt = 1 / math.sqrt(2)
                fam = OrbitFamily("real_circle", (rt + 0j, rt + 0j),
                                  gmin, "real circle")
                return SphereMin(value=gmin, families=(fam,),
                                 method="numeric")
        raise RuntimeError("unrecognised degenerate minimising set")

    gens = [_canonical_generator(x, z, system.n) for _, x, z in kept]
    clusters: list[list[int]] = []
    for i, g in enumerate(gens):
        for cl in clusters:
            if orbit_distance(g, gens[cl[0]], system.n) <= cluster_tol:
                cl.append(i)
                break
        else:
            clusters.append([i])
    fams = []
    for cl in clusters:
        best = min(cl, key=lambda i: kept[i][0])
        fams.append(OrbitFamily("point", gens[best], kept[best][0],
                                "numeric minimiser"))
    fams.sort(key=lambda f: f.chart(system.n))
    return SphereMin(value=gmin, families=tuple(fams), method="numeric")


def _numeric_critical_points(system: System, n_nu: int = 512,
                             n_zeta: int = 512):
    """Stationary orbits of the chart by seeded gradient root finding."""
    nu = np.linspace(0.0, math.pi / 2, n_nu + 1)[1:-1]
    zeta = np.linspace(0.0, TWO_PI, n_zeta, endpoint=False)

    def grad(x):
        return np.array(_chart_gradient(system, x[0], x[1]))

    G = np.empty((nu.size, zeta.size))
    for i, x in enumerate(nu):
        dn, dz = _chart_gradient_rows(system, x, zeta)
        G[i] = np.hypot(dn, dz)
    found = []
    order = np.argsort(G.ravel())[: 40 * 8]
    seeds = []
    for fi in order:
        i, j = divmod(int(fi), zeta.size)
        x0 = (float(nu[i]), float(zeta[j]))
        if all(math.hypot(x0[0] - a, min(abs(x0[1] - b) % TWO_PI,
                                         TWO_PI - abs(x0[1] - b) % TWO_PI))
               > 0.15 for a, b in seeds):
            seeds.append(x0)
        if len(seeds) >= 40:
            break
    for x0 in seeds:
        sol = optimize.root(grad, np.array(x0), tol=1e-12)
        if not sol.success or float(np.max(np.abs(sol.fun))) > 1e-8:
            continue
        gen = _canonical_generator(float(sol.x[0]), float(sol.x[1]), system.n)
        if all(orbit_distance(gen, f.generator, system.n) > 1e-5
               for f in found):
            found.append(OrbitFamily(
                "point", gen, float(chart_value(system, sol.x[0], sol.x[1])),
                "numeric critical point"))
    for pole in ((1.0 + 0j, 0j), (0j, 1.0 + 0j)):
        x0 = (0.0, 0.0) if pole[0] else (math.pi / 2, 0.0)
        dn, _ = _chart_gradient(system, *x0)
        if abs(dn) < 1e-10:
            if all(orbit_distance(pole, f.generator, system.n) > 1e-5
                   for f in found):
                found.append(OrbitFamily(
                    "point", pole, float(chart_value(system, *x0)),
                    "numeric critical point"))
    found.sort(key=lambda f: (f.value, f.chart(system.n)))
    return tuple(found)


def _chart_gradient_rows(system: System, nu: float, zeta_arr):
    """Vectorised chart gradient along one nu row."""
    c, s = math.cos(nu), math.sin(nu)
    cz, sz = np.cos(zeta_arr), np.sin(zeta_arr)
    c2z, s2z = np.cos(2 * zeta_arr), np.sin(2 * zeta_arr)
    if system.kind == "lambda":
        lam = [float(v) for v in system.lambdas]
        q = lam[3] + lam[7]
        b1 = lam[1] + lam[2] + lam[6]
        b2 = lam[5] + lam[9] + lam[10]
        c0 = lam[4] + lam[8]
        B = b1 * c ** 3 * s + b2 * c * s ** 3
        C = c0 * c * c * s * s
        dA = (-4 * lam[0] * c ** 3 * s + 4 * lam[11] * s ** 3 * c
              + q * 2 * c * s * (c * c - s * s))
        dB = b1 * (c ** 4 - 3 * c * c * s * s) + b2 * (3 * c * c * s * s - s ** 4)
        dC = c0 * 2 * c * s * (c * c - s * s)
        return dA + dB * cz + dC * c2z, -B * sz - 2 * C * s2z
    if system.kind == "co":
        kap = system.params["kappa"]
        gam = system.params["gamma"]
        B = -1.5 * gam * c * c * s
        dA = 3 * kap * c * abs(c) * s - 3 * s * abs(s) * c
        dB = -1.5 * gam * (c ** 3 - 2 * c * s * s)
        return dA + dB * cz, -B * sz
    raise ValueError("numeric critical search needs a coefficient system")
