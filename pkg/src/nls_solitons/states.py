"""Bound states, variational functionals, and orbital stability.

A unit vector w that is critical for the restricted nonlinearity, together
with the scalar profile, produces the vector bound state

    Phi = (w_1 Q_{omega,a}, w_2 Q_{omega,a}),   a = -g(w) > 0.

This module assembles those states, evaluates the conserved quantities on
them (closed form via profile norms) and on periodic grid fields (spectral
quadrature), computes the least action and the sharp interpolation
constant, checks the potential-well structure, and classifies stability
from (d, p, n) alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .profiles import ScaledProfile, rescale, solve_Q
from .sphere import OrbitFamily, chart_value, critical_points, gmin_analytic
from .systems import System, eval_F, eval_g

__all__ = [
    "Functionals", "VectorState", "StateCheck", "GNReport", "PotentialWell",
    "StabilityVerdict", "functionals", "field_functionals", "action_min",
    "build_ground_states", "build_bound_states", "verify_excited",
    "gn_constant", "gn_exponents", "gn_check", "potential_well",
    "stability_verdict",
]


@dataclass(frozen=True)
class Functionals:
    """Conserved and variational quantities of a two-component field.

    M mass, H kinetic part, G potential part, E = H + G energy,
    S = E + omega M action, K = 2H + 2 omega M + p G (the Nehari
    derivative), V = 2H + (d(p-2)/2) G (the scaling derivative), and the
    first momentum component P.
    """

    M: float
    H: float
    G: float
    E: float
    S: float
    K: float
    V: float
    P: float = 0.0


def _assemble(M, H, G, omega, d, p, P=0.0):
    M, H, G = float(M), float(H), float(G)
    E = H + G
    return Functionals(M=M, H=H, G=G, E=E, S=E + omega * M,
                       K=2 * H + 2 * omega * M + p * G,
                       V=2 * H + 0.5 * d * (p - 2) * G, P=float(P))


def _unit(w):
    z1, z2 = complex(w[0]), complex(w[1])
    nrm = math.hypot(abs(z1), abs(z2))
    if nrm == 0:
        raise ValueError("zero amplitude vector")
    return (z1 / nrm, z2 / nrm)


@dataclass(frozen=True)
class VectorState:
    """Radial bound state w Q_{omega,a} of the stationary system."""

    system: System
    omega: float
    w: tuple[complex, complex]
    a: float
    profile: ScaledProfile
    kind: str
    orbit: OrbitFamily | None = None

    def __call__(self, r):
        q = self.profile(r)
        return self.w[0] * q, self.w[1] * q

    def functionals(self) -> Functionals:
        return functionals(self, self.system, self.omega)


def functionals(u, system: System | None = None, omega: float = 1.0,
                lengths=None) -> Functionals:
    """Evaluate (M, H, G, E, S, K, V, P).

    Accepts a `VectorState` (closed form through the scalar profile norms)
    or a pair of periodic grid arrays together with the box lengths.
    """
    if isinstance(u, VectorState):
        system = system or u.system
        nrm = u.profile.norms()
        wsq = abs(u.w[0]) ** 2 + abs(u.w[1]) ** 2
        M = 0.5 * wsq * nrm["l2_sq"]
        H = 0.5 * wsq * nrm["grad_sq"]
        G = float(eval_g(system, u.w)) * nrm["p_int"] / system.p
        return _assemble(M, H, G, u.omega, system.d, system.p)
    if system is None or lengths is None:
        raise ValueError("grid fields need the system and the box lengths")
    return field_functionals(u, system, omega, lengths)


def _axis_freqs(shape, lengths):
    return [2 * math.pi * np.fft.fftfreq(nax, d=lax / nax)
            for nax, lax in zip(shape, lengths)]


def field_functionals(u, system: System, omega: float = 1.0,
                      lengths=None) -> Functionals:
    """Spectral quadrature of the functionals on a periodic box."""
    u1 = np.asarray(u[0], dtype=complex)
    u2 = np.asarray(u[1], dtype=complex)
    if u1.shape != u2.shape:
        raise ValueError("component grids differ")
    d = u1.ndim
    if lengths is None:
        raise ValueError("box lengths are required")
    if np.isscalar(lengths):
        lengths = (float(lengths),) * d
    cell = 1.0
    for nax, lax in zip(u1.shape, lengths):
        cell *= lax / nax
    npts = u1.size
    ft1 = np.fft.fftn(u1)
    ft2 = np.fft.fftn(u2)
    freqs = _axis_freqs(u1.shape, lengths)
    k2 = np.zeros(u1.shape)
    for ax, k in enumerate(freqs):
        sh = [1] * d
        sh[ax] = -1
        k2 = k2 + k.reshape(sh) ** 2
    w = cell / npts
    p1 = np.abs(ft1) ** 2
    p2 = np.abs(ft2) ** 2
    M = 0.5 * w * float(p1.sum() + p2.sum())
    H = 0.5 * w * float((k2 * p1).sum() + (k2 * p2).sum())
    k1 = freqs[0].reshape([-1] + [1] * (d - 1))
    n1, n2 = system.n
    P = w * float((k1 * p1).sum() / n1 + (k1 * p2).sum() / n2)
    G = cell * float(np.sum(eval_g(system, (u1, u2)))) / system.p
    return _assemble(M, H, G, omega, system.d, system.p, P=P)


# ---------------------------------------------------------------------------
# Construction of states


def action_min(system: System, omega: float = 1.0) -> float:
    """Least action among nontrivial bound states at frequency omega."""
    gmin = gmin_analytic(system).value
    if gmin >= 0:
        raise ValueError(
            "sphere minimum is nonnegative: no nontrivial bound states")
    sc = system.s_c
    m2 = solve_Q(system.d, system.p).norms()["l2_sq"]
    return (m2 * (-gmin) ** (sc - system.d / 2) * omega ** (1 - sc)
            / (2 * (1 - sc)))


def build_ground_states(system: System, omega: float = 1.0
                        ) -> tuple[VectorState, ...]:
    """One representative state per minimising orbit family."""
    sm = gmin_analytic(system)
    if sm.value >= 0:
        raise ValueError(
            "sphere minimum is nonnegative: no nontrivial bound states")
    a = -sm.value
    prof = rescale(solve_Q(system.d, system.p), omega, a)
    return tuple(
        VectorState(system, float(omega), _unit(fam.generator), float(a),
                    prof, "ground", fam)
        for fam in sm.families)


def build_bound_states(system: System, omega: float = 1.0
                       ) -> tuple[VectorState, ...]:
    """Ground and excited states, one per critical family with g(w) < 0."""
    gmin = gmin_analytic(system).value
    base = solve_Q(system.d, system.p)
    out = []
    for fam in critical_points(system):
        if fam.value >= 0:
            continue
        a = -fam.value
        kind = ("ground"
                if fam.value <= gmin + 1e-12 * max(1.0, abs(gmin))
                else "excited")
        out.append(VectorState(system, float(omega), _unit(fam.generator),
                               float(a), rescale(base, omega, a), kind, fam))
    return tuple(out)


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class StateCheck:
    """Numbers behind a bound-state verification, plus the verdict."""

    passed: bool
    is_ground: bool
    criticality: float
    amplitude_gap: float
    amplitude_ok: bool
    residual: float


def _fd_chart_gradient(system, nu, zeta, h=1e-3):
    def f(x, z):
        return float(chart_value(system, x, z))

    dnu = (-f(nu + 2 * h, zeta) + 8 * f(nu + h, zeta)
           - 8 * f(nu - h, zeta) + f(nu - 2 * h, zeta)) / (12 * h)
    dze = (-f(nu, zeta + 2 * h) + 8 * f(nu, zeta + h)
           - 8 * f(nu, zeta - h) + f(nu, zeta - 2 * h)) / (12 * h)
    return dnu, dze


def _radial_laplacian(x, q, d):
    """4th order finite differences; left edge closed by even symmetry."""
    h = x[1] - x[0]
    qp = np.concatenate([q[1::-1], q, q[:-3:-1]])
    i = np.arange(x.size) + 2
    d1 = (-qp[i + 2] + 8 * qp[i + 1] - 8 * qp[i - 1] + qp[i - 2]) / (12 * h)
    d2 = (-qp[i + 2] + 16 * qp[i + 1] - 30 * qp[i]
          + 16 * qp[i - 1] - qp[i - 2]) / (12 * h * h)
    return d2 + (d - 1) / x * d1


def verify_excited(system: System, w, a: float, omega: float = 1.0,
                   grad_tol: float = 1e-6,
                   residual_tol: float | None = None) -> StateCheck:
    """Check that w, a produce a genuine bound state.

    Three independent checks: w is critical on the sphere (finite
    differences of the chart, not the case tables), a equals -g(w) and is
    positive, and the stationary system holds on a radial grid with a
    finite-difference Laplacian.
    """
    z1, z2 = complex(w[0]), complex(w[1])
    if abs(math.hypot(abs(z1), abs(z2)) - 1) > 1e-8:
        raise ValueError("amplitude direction must be a unit vector")
    if residual_tol is None:
        residual_tol = 1e-5 if system.d == 1 else 1e-3

    nu = math.atan2(abs(z2), abs(z1))
    if abs(z1) < 1e-9 or abs(z2) < 1e-9:
        crit = max(
            abs(_fd_chart_gradient(system, nu, z)[0])
            for z in np.linspace(0, 2 * math.pi, 8, endpoint=False))
    else:
        zeta = cmath.phase(z2 ** system.n[0] * z1.conjugate() ** system.n[1])
        crit = max(abs(g) for g in _fd_chart_gradient(system, nu, zeta))

    g_w = float(eval_g(system, (z1, z2)))
    amplitude_gap = abs(a + g_w)
    amplitude_ok = a > 0 and amplitude_gap <= 1e-8 * max(1.0, abs(g_w))

    residual = math.inf
    if a > 0:
        base = solve_Q(system.d, system.p)
        prof = rescale(base, omega, a)
        rmax = (base.r_cut - 1.0) / math.sqrt(omega)
        npts = 2000
        h = rmax / npts
        x = (np.arange(npts) + 0.5) * h
        q = prof(x)
        lap = _radial_laplacian(x, q, system.d)
        F1, F2 = eval_F(system, (z1 * q, z2 * q))
        keep = slice(None, npts - 2)
        res = max(
            float(np.max(np.abs(-z1 * lap + omega * z1 * q + F1)[keep])),
            float(np.max(np.abs(-z2 * lap + omega * z2 * q + F2)[keep])))
        residual = res / float(q.max())

    is_ground = False
    try:
        gmin = gmin_analytic(system).value
        is_ground = (gmin < 0 and crit <= grad_tol
                     and abs(a + gmin) <= 1e-8 * max(1.0, abs(gmin)))
    except ValueError:
        pass
    passed = bool(crit <= grad_tol and amplitude_ok
                  and residual <= residual_tol)
    return StateCheck(passed=passed, is_ground=is_ground,
                      criticality=float(crit),
                      amplitude_gap=float(amplitude_gap),
                      amplitude_ok=bool(amplitude_ok),
                      residual=float(residual))


# ---------------------------------------------------------------------------
# Sharp interpolation inequality


def gn_exponents(d: int, p: float) -> tuple[float, float]:
    """(mass, kinetic) exponents of the interpolation bound."""
    th = d * (p - 2) / 4
    return p / 2 - th, th


def gn_constant(system: System, base=None) -> float:
    """Sharp constant C in -G(u) <= C M(u)^theta_M H(u)^theta_H.

    Equality holds exactly on the ground states, which pins the constant
    to the scalar profile norms and the sphere minimum.
    """
    gmin = gmin_analytic(system).value
    if gmin >= 0:
        raise ValueError("sphere minimum is nonnegative: bound is trivial")
    d, p = system.d, system.p
    if base is None:
        base = solve_Q(d, p)
    nrm = base.norms()
    _, th = gn_exponents(d, p)
    cp = nrm["p_int"] / (nrm["l2_sq"] ** (p / 2 - th)
                         * nrm["grad_sq"] ** th)
    return (-gmin) * 2 ** (p / 2) / p * cp


@dataclass(frozen=True)
class GNReport:
    constant: float
    violations: int
    worst_ratio: float
    equality_gap: float


def gn_check(system: System, n_fields: int = 10000, seed: int = 0,
             grid: int | None = None, box: float = 16.0) -> GNReport:
    """Stress the interpolation bound on band-limited random fields.

    Draws seeded Gaussian spectral data with random bandwidths, evaluates
    the three functionals in one vectorised sweep, and counts violations
    of -G <= C M^theta_M H^theta_H.  Also reports the relative equality
    gap on a constructed ground state.
    """
    d, p = system.d, system.p
    if grid is None:
        grid = 256 if d == 1 else 64
    C = gn_constant(system)
    aM, aH = gn_exponents(d, p)
    shape = (grid,) * d
    npts = grid ** d
    cell = (box / grid) ** d
    freqs = _axis_freqs(shape, (box,) * d)
    k2 = np.zeros(shape)
    for ax, k in enumerate(freqs):
        sh = [1] * d
        sh[ax] = -1
        k2 = k2 + k.reshape(sh) ** 2

    rng = np.random.default_rng(seed)
    kmax = 2 * math.pi * grid / (2 * box)
    batch = 2000 if d == 1 else 250
    worst = -math.inf
    violations = 0
    done = 0
    while done < n_fields:
        m = min(batch, n_fields - done)
        width = rng.uniform(0.1, 0.5, size=(m, 1)) * kmax
        env = np.exp(-k2.reshape(1, -1) / width ** 2)
        spec = []
        for _ in range(2):
            coef = (rng.standard_normal((m, npts))
                    + 1j * rng.standard_normal((m, npts))) * env
            spec.append(coef)
        pw1 = np.abs(spec[0]) ** 2
        pw2 = np.abs(spec[1]) ** 2
        wq = cell / npts
        M = 0.5 * wq * (pw1.sum(axis=1) + pw2.sum(axis=1))
        H = 0.5 * wq * ((k2.reshape(1, -1) * pw1).sum(axis=1)
                        + (k2.reshape(1, -1) * pw2).sum(axis=1))
        u1 = np.fft.ifftn(spec[0].reshape((m,) + shape),
                          axes=tuple(range(1, d + 1)))
        u2 = np.fft.ifftn(spec[1].reshape((m,) + shape),
                          axes=tuple(range(1, d + 1)))
        gv = eval_g(system, (u1, u2)).reshape(m, -1)
        G = cell * gv.sum(axis=1) / p
        ratio = (-G) / (C * M ** aM * H ** aH)
        worst = max(worst, float(ratio.max()))
        violations += int(np.count_nonzero(ratio > 1 + 1e-12))
        done += m

    st = build_ground_states(system)[0]
    f = st.functionals()
    equality_gap = abs((-f.G) / (C * f.M ** aM * f.H ** aH) - 1)
    return GNReport(constant=C, violations=violations,
                    worst_ratio=worst, equality_gap=float(equality_gap))


# ---------------------------------------------------------------------------
# Potential well (mass-supercritical scaling)


@dataclass(frozen=True)
class PotentialWell:
    sc: float
    i3: float
    threshold: float
    action_gap: float
    product_gap: float
    trichotomy_ok: bool


def _dilate(f: Functionals, c: float, d: int, p: float,
            omega: float) -> Functionals:
    """Functionals of the mass-preserving dilation c^{d/2} u(c .)."""
    q = 0.5 * d * (p - 2)
    return _assemble(f.M, c * c * f.H, c ** q * f.G, omega, d, p)


def potential_well(system: System, omega: float = 1.0) -> PotentialWell:
    """Well constants plus on-the-spot checks of the dichotomy bounds.

    Verifies on the ground state that the action matches the minimal one
    and that H M^{(1-sc)/sc} attains the well level, then walks the
    dilation family through both sides of the well and asserts the sign
    and the quantitative bound on each branch.
    """
    d, p = system.d, system.p
    sc = system.s_c
    if sc <= 0:
        raise ValueError("potential well needs mass-supercritical scaling")
    gmin = gmin_analytic(system).value
    if gmin >= 0:
        raise ValueError(
            "sphere minimum is nonnegative: no nontrivial bound states")
    m2 = solve_Q(d, p).norms()["l2_sq"]
    i3 = (d / (2 * (1 - sc))) * (0.5 * (-gmin) ** (sc - d / 2) * m2) ** (1 / sc)
    thr = (2 * sc / d) * i3

    st = build_ground_states(system, omega)[0]
    f = st.functionals()
    sig = (1 - sc) / sc
    action_gap = abs(f.S - action_min(system, omega)) / abs(f.S)
    product_gap = abs(f.H * f.M ** sig - i3) / i3

    ok = True
    q = 0.5 * d * (p - 2)
    for c in (0.6, 0.85, 0.97):
        fc = _dilate(f, c, d, p, omega)
        delta = 1 - fc.E * fc.M ** sig / thr
        dtil = 2 * (1 - (1 - delta) ** ((q - 2) / 2))
        ok &= fc.H * fc.M ** sig < i3
        ok &= fc.V > 0 and fc.V >= dtil * fc.H - 1e-12 * abs(fc.H)
    for c in (1.03, 1.4, 2.5):
        fc = _dilate(f, c, d, p, omega)
        delta = 1 - fc.E * fc.M ** sig / thr
        ok &= fc.V < 0
        ok &= fc.V * fc.M ** sig <= -thr * delta + 1e-12 * i3
    return PotentialWell(sc=float(sc), i3=float(i3), threshold=float(thr),
                         action_gap=float(action_gap),
                         product_gap=float(product_gap),
                         trichotomy_ok=bool(ok))


# ---------------------------------------------------------------------------
# Stability


@dataclass(frozen=True)
class StabilityVerdict:
    """Pure function of (d, p, n): regime and the applicable mechanism."""

    regime: str
    route: str | None
    route_available: bool


def stability_verdict(d: int, p: float, n=(1, 1)) -> StabilityVerdict:
    pmax = math.inf if d <= 2 else 2 * d / (d - 2)
    if not 2 < p < pmax:
        raise ValueError("p outside the subcritical range")
    if p < 2 + 4 / d:
        return StabilityVerdict("stable", "subcritical variational route",
                                True)
    if all(x == 1 for x in n):
        return StabilityVerdict("unstable", "mass-resonance route", True)
    if not ((d == 1 and p >= 6) or (d == 2 and p > 6)):
        return StabilityVerdict("unstable", "radial-virial route", True)
    return StabilityVerdict("unstable", None, False)
