"""Positive decaying radial profiles of -Q'' - (d-1)Q'/r + Q = Q^{p-1}.

One space dimension has a closed sech-power form.  Higher dimensions use
a bisection shooting method on the central value, with the far field
replaced by the decaying asymptotic once the integrated trajectory stops
being trustworthy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, interpolate, special


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its target accuracy."""


def sigma_d(d: int) -> float:
    """Surface measure of the unit sphere in d dimensions."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Sampled radial profile with an analytic exponential tail.

    The samples cover [0, r_cut] on a uniform grid; beyond r_cut the
    profile continues as A r^{-(d-1)/2} e^{-r}.  Norm integrals carry the
    d-dimensional surface measure.
    """

    d: int
    p: float
    q0: float
    r: np.ndarray
    q: np.ndarray
    qp: np.ndarray
    tail_amp: float
    closed_form: tuple | None = None
    _spline: object = field(default=None, repr=False, compare=False)

    @property
    def r_cut(self) -> float:
        return float(self.r[-1])

    def __call__(self, rr):
        rr = np.abs(np.asarray(rr, dtype=float))
        if self.closed_form is not None:
            C, m, k = self.closed_form
            return C * np.cosh(k * rr) ** (-m)
        out = np.empty_like(rr)
        inside = rr <= self.r_cut
        out[inside] = self._spline(rr[inside])
        out[~inside] = self._tail(rr[~inside])
        return out

    def derivative(self, rr):
        rr = np.asarray(rr, dtype=float)
        sign = np.sign(rr)
        rr = np.abs(rr)
        if self.closed_form is not None:
            C, m, k = self.closed_form
            val = -C * m * k * np.cosh(k * rr) ** (-m) * np.tanh(k * rr)
            return sign * val
        out = np.empty_like(rr)
        inside = rr <= self.r_cut
        out[inside] = self._spline.derivative()(rr[inside])
        rt = rr[~inside]
        out[~inside] = self._tail(rt) * (-(self.d - 1) / (2 * rt) - 1.0)
        return sign * out

    def _tail(self, rr):
        return self.tail_amp * rr ** (-(self.d - 1) / 2) * np.exp(-rr)

    def norms(self) -> dict:
        """Squared L2 and gradient norms and the p-th power integral."""
        cached = getattr(self, "_norms_cache", None)
        if cached is None:
            cached = _profile_norms(self)
            object.__setattr__(self, "_norms_cache", cached)
        return dict(cached)

    def ode_residual(self, margin: float = 1.0) -> float:
        """Sup of the profile equation on the resolved region.

        Uses fourth order finite differences on the stored samples, so it
        is independent of how the samples were produced.
        """
        h = float(self.r[1] - self.r[0])
        q = self.q
        i = np.arange(2, len(q) - 2)
        rr = self.r[i]
        upto = rr <= self.r_cut - margin
        i, rr = i[upto], rr[upto]
        d2 = (-q[i - 2] + 16 * q[i - 1] - 30 * q[i]
              + 16 * q[i + 1] - q[i + 2]) / (12 * h * h)
        d1 = (q[i - 2] - 8 * q[i - 1] + 8 * q[i + 1] - q[i + 2]) / (12 * h)
        qq = q[i]
        res = d2 - qq + np.sign(qq) * np.abs(qq) ** (self.p - 1)
        nz = rr > 0
        res[nz] += (self.d - 1) * d1[nz] / rr[nz]
        return float(np.max(np.abs(res)))


def _profile_norms(prof: RadialProfile) -> dict:
    sd = sigma_d(prof.d)
    if prof.closed_form is not None:
        # Exact values from the beta function and the one dimensional
        # virial identities for this profile family.
        C, m, k = prof.closed_form
        m2 = C * C / k * 4 ** m * special.beta(m, m) / 2
        sp = 0.5 - 1.0 / prof.p
        g2 = sp / (1 - sp) * m2
        pp = 1 / (1 - sp) * m2
        return {"l2_sq": m2, "grad_sq": g2, "p_int": pp}
    r, q, qp = prof.r, prof.q, prof.qp
    w = r ** (prof.d - 1)
    m2 = integrate.simpson(q * q * w, x=r)
    g2 = integrate.simpson(qp * qp * w, x=r)
    pp = integrate.simpson(np.abs(q) ** prof.p * w, x=r)
    rt = np.linspace(prof.r_cut, prof.r_cut + 25.0, 2001)
    qt = prof._tail(rt)
    qpt = qt * (-(prof.d - 1) / (2 * rt) - 1.0)
    wt = rt ** (prof.d - 1)
    m2 += integrate.simpson(qt * qt * wt, x=rt)
    g2 += integrate.simpson(qpt * qpt * wt, x=rt)
    pp += integrate.simpson(np.abs(qt) ** prof.p * wt, x=rt)
    return {"l2_sq": sd * m2, "grad_sq": sd * g2, "p_int": sd * pp}


def _closed_form_1d(p: float) -> RadialProfile:
    m = 2 / (p - 2)
    k = (p - 2) / 2
    C = (p / 2) ** (1 / (p - 2))
    r = np.linspace(0.0, 25.0, 8001)
    q = C * np.cosh(k * r) ** (-m)
    qp = -C * m * k * np.cosh(k * r) ** (-m) * np.tanh(k * r)
    return RadialProfile(d=1, p=p, q0=C, r=r, q=q, qp=qp,
                         tail_amp=float(q[-1] * math.exp(r[-1])),
                         closed_form=(C, m, k))


def _shoot(d: int, p: float, q0: float, r_end: float):
    """Integrate from the centre; classify as over- or undershoot."""
    r0 = 1e-3
    c2 = (q0 - q0 ** (p - 1)) / (2 * d)
    y0 = [q0 + c2 * r0 * r0, 2 * c2 * r0]

    def rhs(rr, y):
        qv, qd = y
        nl = math.copysign(abs(qv) ** (p - 1), qv)
        return [qd, qv - nl - (d - 1) * qd / rr]

    def ev_cross(rr, y):
        return y[0]

    ev_cross.terminal = True
    ev_cross.direction = -1

    def ev_turn(rr, y):
        return y[1]

    ev_turn.terminal = True
    ev_turn.direction = 1

    sol = integrate.solve_ivp(
        rhs, (r0, r_end), y0, method="DOP853",
        rtol=1e-12, atol=1e-14, events=(ev_cross, ev_turn), dense_output=True)
    if sol.t_events[0].size:
        return "over", sol
    if sol.t_events[1].size:
        return "under", sol
    return "under", sol


@lru_cache(maxsize=32)
def _solve_q_cached(d: int, p: float) -> RadialProfile:
    if d == 1:
        return _closed_form_1d(p)
    r_end = 18.0
    lo, hi = 1.01, 10.0
    kind, _ = _shoot(d, p, lo, r_end)
    if kind != "under":
        raise ConvergenceError("lower shooting bracket is not an undershoot")
    kind, _ = _shoot(d, p, hi, r_end)
    while kind != "over":
        hi *= 2
        if hi > 1e3:
            raise ConvergenceError("failed to bracket the central value")
        kind, _ = _shoot(d, p, hi, r_end)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        kind, _ = _shoot(d, p, mid, r_end)
        if kind == "over":
            hi = mid
        else:
            lo = mid
    q0 = 0.5 * (lo + hi)
    r_cut = 11.5
    _, sol = _shoot(d, p, q0, r_end)
    span = min(r_cut, float(sol.t[-1]))
    r = np.linspace(0.0, span, 8001)
    ys = np.empty((2, r.size))
    ys[:, 1:] = sol.sol(r[1:])
    c2 = (q0 - q0 ** (p - 1)) / (2 * d)
    ys[0, 0], ys[1, 0] = q0, 0.0
    # Replace the innermost samples by the series (the IVP started at 1e-3).
    inner = r < 1e-3
    ys[0, inner] = q0 + c2 * r[inner] ** 2
    ys[1, inner] = 2 * c2 * r[inner]
    q, qp = ys[0], ys[1]
    if np.any(q <= 0):
        raise ConvergenceError("shooting produced a sign change")
    amp = float(q[-1] * span ** ((d - 1) / 2) * math.exp(span))
    spline = interpolate.CubicHermiteSpline(r, q, qp)
    prof = RadialProfile(d=d, p=p, q0=q0, r=r, q=q, qp=qp, tail_amp=amp)
    object.__setattr__(prof, "_spline", spline)
    return prof


def solve_Q(d: int, p: float) -> RadialProfile:
    """Ground profile of the scalar field equation in d dimensions."""
    if d < 1:
        raise ValueError("dimension must be positive")
    sup = math.inf if d <= 2 else 2 * d / (d - 2)
    if not 2 < p < sup:
        raise ValueError(f"power p={p} outside (2, 2*) for d={d}")
    return _solve_q_cached(int(d), float(p))


@dataclass(frozen=True, eq=False)
class ScaledProfile:
    """The two-parameter rescaling (omega/a)^{1/(p-2)} Q(sqrt(omega) r)."""

    base: RadialProfile
    omega: float
    a: float

    def __post_init__(self):
        if self.omega <= 0 or self.a <= 0:
            raise ValueError("rescaling needs omega > 0 and a > 0")

    @property
    def amp(self) -> float:
        return (self.omega / self.a) ** (1 / (self.base.p - 2))

    def __call__(self, rr):
        return self.amp * self.base(np.sqrt(self.omega) * np.asarray(rr))

    def derivative(self, rr):
        root = math.sqrt(self.omega)
        return self.amp * root * self.base.derivative(root * np.asarray(rr))

    def norms(self) -> dict:
        base = self.base.norms()
        d, p = self.base.d, self.base.p
        a2 = self.amp * self.amp
        return {
            "l2_sq": a2 * self.omega ** (-d / 2) * base["l2_sq"],
            "grad_sq": a2 * self.omega ** (1 - d / 2) * base["grad_sq"],
            "p_int": self.amp ** p * self.omega ** (-d / 2) * base["p_int"],
        }


def rescale(profile: RadialProfile, omega: float, a: float) -> ScaledProfile:
    """Profile solving -Delta u + omega u = a u^{p-1}."""
    return ScaledProfile(base=profile, omega=omega, a=a)


def profile_norms(profile) -> dict:
    """Norm dictionary for plain or rescaled profiles."""
    return profile.norms()
