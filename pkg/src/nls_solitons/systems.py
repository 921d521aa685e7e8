"""System definitions and algebra on cubic two-component nonlinearities.

A system couples two complex fields through a gauge-invariant nonlinearity.
The cubic family is parametrised by twelve real coefficients (six monomials
per component); several named standard forms pick out structured subfamilies.
The quadratic two-wave resonance model ("CO") is kept as a separate kind
because its nonlinearity is not polynomial in the fields alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

STANDARD_FORMS = ("NLS1", "NLS2", "NLS3", "NLS4", "NLS5")

# Monomial exponents (z1, conj z1, z2, conj z2) shared by both components.
# Component one uses coefficients 1..6, component two uses 7..12.
MONOMIALS = (
    (2, 1, 0, 0),
    (1, 1, 1, 0),
    (2, 0, 0, 1),
    (1, 0, 1, 1),
    (0, 1, 2, 0),
    (0, 0, 2, 1),
)


def _half(x):
    """Divide by two without losing exactness on integers."""
    if isinstance(x, int):
        return Fraction(x, 2)
    return x / 2


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _sobolev_sup(d: int) -> float:
    """Supremum of admissible powers: 2d/(d-2) for d >= 3, else infinity."""
    if d <= 2:
        return math.inf
    return 2 * d / (d - 2)


@dataclass(frozen=True)
class System:
    """A two-component system in one of three kinds.

    kind "lambda": cubic nonlinearity given by twelve monomial coefficients.
    kind "co": the quadratic two-wave resonance model with parameters
    kappa and gamma, weights n = (1, 2) and power p = 3.
    kind "custom": nonlinearity supplied as a callable g (and optionally F).
    """

    kind: str
    d: int
    p: float
    n: tuple[int, int]
    form: str | None = None
    params: dict = field(default_factory=dict)
    lambdas: tuple | None = None
    g_fn: Callable | None = None
    F_fn: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("lambda", "co", "custom"):
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.d < 1:
            raise ValueError("dimension must be a positive integer")
        if len(self.n) != 2 or any(m < 1 or m != int(m) for m in self.n):
            raise ValueError("weights n must be a pair of positive integers")
        if not 2 < self.p < _sobolev_sup(self.d):
            raise ValueError(
                f"power p={self.p} outside the admissible range for d={self.d}"
            )
        if self.kind == "lambda":
            if self.lambdas is None or len(self.lambdas) != 12:
                raise ValueError("lambda systems need exactly 12 coefficients")
            if self.p != 4:
                raise ValueError("lambda systems are cubic: p must be 4")
            if tuple(self.n) != (1, 1):
                raise ValueError("lambda systems use weights n = (1, 1)")
        if self.kind == "co" and (self.p != 3 or tuple(self.n) != (1, 2)):
            raise ValueError("the resonance model has p = 3 and n = (1, 2)")
        if self.kind == "custom" and self.g_fn is None:
            raise ValueError("custom systems need a callable g")

    @property
    def s_c(self) -> float:
        """Scaling-critical Sobolev index d/2 - 2/(p-2)."""
        return self.d / 2 - 2 / (self.p - 2)

    def describe(self) -> str:
        if self.form is not None:
            args = ", ".join(f"{k}={v}" for k, v in self.params.items())
            return f"{self.form}({args}), d={self.d}"
        return f"{self.kind} system, d={self.d}, p={self.p}, n={self.n}"


def standard_lambdas(form: str, params: dict) -> tuple:
    """Coefficient vector of a named cubic standard form.

    Exact inputs (ints, Fractions) produce exact coefficients.
    """
    lam = [0] * 12
    if form == "NLS1":
        lam[0] = params["alpha"]
        lam[11] = params["beta"]
    elif form == "NLS2":
        a, b, s = params["alpha"], params["beta"], params["sigma"]
        lam[0] = a + s
        lam[3] = s
        lam[7] = s
        lam[11] = b + s
    elif form in ("NLS3", "NLS4", "NLS5"):
        a1, a2, r = params["alpha1"], params["alpha2"], params["r"]
        lam[0] = 3 * a1 + a2 + r
        lam[11] = 3 * a1 + a2 + r
        lam[3] = 2 * (a1 - a2) + r
        lam[7] = 2 * (a1 - a2) + r
        lam[4] = a1 - a2
        lam[8] = a1 - a2
        if form == "NLS4":
            a3 = params["alpha3"]
            lam[0] = lam[0] + 2 * a3
            lam[11] = lam[11] - 2 * a3
        elif form == "NLS5":
            a3, eta = params["alpha3"], params["eta"]
            ce, se = math.cos(eta), math.sin(eta)
            lam[0] = lam[0] + 2 * a3 * ce
            lam[11] = lam[11] - 2 * a3 * ce
            lam[1] = 2 * a3 * se
            lam[9] = 2 * a3 * se
            for k in (2, 5, 6, 10):
                lam[k] = a3 * se
    else:
        raise ValueError(f"unknown standard form {form!r}")
    return tuple(lam)


def _check_normalised(*alphas, tol: float = 1e-8) -> None:
    s = sum(a * a for a in alphas)
    if abs(s - 1) > tol:
        raise ValueError("alpha parameters must lie on the unit sphere")


def nls1(alpha: int, beta: int, d: int = 1) -> System:
    """Decoupled focusing/defocusing pair: g = alpha|u1|^4 + beta|u2|^4."""
    if alpha not in (-1, 0, 1) or beta not in (-1, 0, 1):
        raise ValueError("NLS1 needs alpha, beta in {-1, 0, 1}")
    if alpha < beta:
        raise ValueError("NLS1 is normalised so that alpha >= beta")
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), form="NLS1",
        params={"alpha": alpha, "beta": beta},
        lambdas=standard_lambdas("NLS1", {"alpha": alpha, "beta": beta}),
    )


def nls2(alpha: int, beta: int, sigma: int, d: int = 1) -> System:
    """Quartic pair plus an isotropic quartic coupling of sign sigma."""
    if alpha not in (-1, 0, 1) or beta not in (-1, 0, 1):
        raise ValueError("NLS2 needs alpha, beta in {-1, 0, 1}")
    if alpha < beta:
        raise ValueError("NLS2 is normalised so that alpha >= beta")
    if sigma not in (-1, 1):
        raise ValueError("NLS2 needs sigma in {-1, 1}")
    p = {"alpha": alpha, "beta": beta, "sigma": sigma}
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), form="NLS2",
        params=p, lambdas=standard_lambdas("NLS2", p),
    )


def nls3(alpha1, alpha2, r, d: int = 1) -> System:
    """Isotropic-plus-anisotropic quartic family with a free trace shift r."""
    if alpha2 < 0:
        raise ValueError("NLS3 is normalised so that alpha2 >= 0")
    _check_normalised(alpha1, alpha2)
    if alpha1 * alpha1 == alpha2 * alpha2:
        raise ValueError("NLS3 requires alpha1^2 != alpha2^2")
    p = {"alpha1": alpha1, "alpha2": alpha2, "r": r}
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), form="NLS3",
        params=p, lambdas=standard_lambdas("NLS3", p),
    )


def nls4(alpha1, alpha2, alpha3, r, d: int = 1) -> System:
    """NLS3 family broken by a real component-asymmetric term."""
    if alpha2 < 0:
        raise ValueError("NLS4 is normalised so that alpha2 >= 0")
    if alpha3 <= 0:
        raise ValueError("NLS4 requires alpha3 > 0")
    if alpha1 == alpha2:
        raise ValueError("NLS4 requires alpha1 != alpha2")
    _check_normalised(alpha1, alpha2, alpha3)
    p = {"alpha1": alpha1, "alpha2": alpha2, "alpha3": alpha3, "r": r}
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), form="NLS4",
        params=p, lambdas=standard_lambdas("NLS4", p),
    )


def nls5(alpha1, alpha2, alpha3, eta, r, d: int = 1) -> System:
    """NLS4 family with the asymmetric term rotated by a phase eta."""
    if alpha2 <= 0:
        raise ValueError("NLS5 requires alpha2 > 0")
    if alpha3 <= 0:
        raise ValueError("NLS5 requires alpha3 > 0")
    if not 0 < eta < math.pi:
        raise ValueError("NLS5 requires eta in (0, pi)")
    if eta > math.pi / 2 and alpha1 <= 0:
        raise ValueError("NLS5 requires alpha1 > 0 when eta > pi/2")
    _check_normalised(alpha1, alpha2, alpha3)
    p = {"alpha1": alpha1, "alpha2": alpha2, "alpha3": alpha3,
         "eta": eta, "r": r}
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), form="NLS5",
        params=p, lambdas=standard_lambdas("NLS5", p),
    )


def colin_ohta(kappa: float, gamma: float, d: int = 1) -> System:
    """Two-wave resonance model: quadratic coupling, weights (1, 2), p = 3."""
    if gamma <= 0:
        raise ValueError("the resonance model requires gamma > 0")
    if d > 5:
        raise ValueError("the resonance model requires d <= 5")
    return System(
        kind="co", d=d, p=3.0, n=(1, 2), form="CO",
        params={"kappa": kappa, "gamma": gamma},
    )


def from_lambdas(lambdas: Sequence, d: int = 1) -> System:
    """Cubic system from its twelve monomial coefficients."""
    return System(
        kind="lambda", d=d, p=4.0, n=(1, 1), lambdas=tuple(lambdas),
    )


def custom(g: Callable, p: float, n: tuple[int, int] = (1, 1),
           d: int = 1, F: Callable | None = None) -> System:
    """System with a user-supplied homogeneous nonlinearity g(z1, z2).

    If the component nonlinearities F are not supplied they are recovered
    from g by numerical Wirtinger differentiation.
    """
    return System(kind="custom", d=d, p=float(p), n=tuple(n),
                  g_fn=g, F_fn=F)


def make_standard(form: str, params: dict, d: int = 1) -> System:
    """Dispatch to the named constructor; used by parsers."""
    if form == "NLS1":
        return nls1(params["alpha"], params["beta"], d=d)
    if form == "NLS2":
        return nls2(params["alpha"], params["beta"], params["sigma"], d=d)
    if form == "NLS3":
        return nls3(params["alpha1"], params["alpha2"], params["r"], d=d)
    if form == "NLS4":
        return nls4(params["alpha1"], params["alpha2"], params["alpha3"],
                    params["r"], d=d)
    if form == "NLS5":
        return nls5(params["alpha1"], params["alpha2"], params["alpha3"],
                    params["eta"], params["r"], d=d)
    if form == "CO":
        return colin_ohta(params["kappa"], params["gamma"], d=d)
    raise ValueError(f"unknown standard form {form!r}")


# ---------------------------------------------------------------------------
# Evaluation


def eval_F(system: System, z):
    """Component nonlinearities (F1, F2) at z = (z1, z2).

    Accepts scalars or numpy arrays; returns complex values of the same
    shape.  The fields satisfy F_j = (2/p) d g / d conj(z_j).
    """
    z1 = np.asarray(z[0], dtype=complex)
    z2 = np.asarray(z[1], dtype=complex)
    if system.kind == "lambda":
        lam = [complex(v) for v in system.lambdas]
        a1 = np.abs(z1) ** 2
        a2 = np.abs(z2) ** 2
        c1 = np.conj(z1)
        c2 = np.conj(z2)
        F1 = (lam[0] * a1 * z1 + lam[1] * a1 * z2 + lam[2] * z1 * z1 * c2
              + lam[3] * a2 * z1 + lam[4] * c1 * z2 * z2 + lam[5] * a2 * z2)
        F2 = (lam[6] * a1 * z1 + lam[7] * a1 * z2 + lam[8] * z1 * z1 * c2
              + lam[9] * a2 * z1 + lam[10] * c1 * z2 * z2 + lam[11] * a2 * z2)
        return F1, F2
    if system.kind == "co":
        kappa = system.params["kappa"]
        gamma = system.params["gamma"]
        F1 = -kappa * np.abs(z1) * z1 - gamma * np.conj(z1) * z2
        F2 = -np.abs(z2) * z2 - (gamma / 2) * z1 * z1
        return F1, F2
    if system.F_fn is not None:
        return system.F_fn(z1, z2)
    return wirtinger_F(system.g_fn, z1, z2, system.p)


def eval_g(system: System, z):
    """Real nonlinearity density g at z = (z1, z2)."""
    z1 = np.asarray(z[0], dtype=complex)
    z2 = np.asarray(z[1], dtype=complex)
    if system.kind == "lambda":
        lam = [float(v) for v in system.lambdas]
        a1 = np.abs(z1) ** 2
        a2 = np.abs(z2) ** 2
        w = np.conj(z1) * z2
        out = (lam[0] * a1 * a1 + lam[11] * a2 * a2
               + (lam[3] + lam[7]) * a1 * a2
               + (lam[1] + lam[2] + lam[6]) * a1 * w.real
               + (lam[4] + lam[8]) * (w * w).real
               + (lam[5] + lam[9] + lam[10]) * a2 * w.real)
        return out
    if system.kind == "co":
        kappa = system.params["kappa"]
        gamma = system.params["gamma"]
        return (-kappa * np.abs(z1) ** 3 - np.abs(z2) ** 3
                - 1.5 * gamma * (np.conj(z1) ** 2 * z2).real)
    return np.real(system.g_fn(z1, z2))


def wirtinger_F(g: Callable, z1, z2, p: float, h: float = 1e-5):
    """Recover F_j = (2/p) dg/d conj(z_j) by fourth order differences."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)

    def diff(f, x, step):
        return (8 * (f(x + step) - f(x - step))
                - (f(x + 2 * step) - f(x - 2 * step))) / (12 * step)

    scale = 1.0 + max(np.max(np.abs(z1)), np.max(np.abs(z2)))
    s = h * scale
    dx1 = diff(lambda t: np.real(g(z1 + t, z2)), 0.0, s)
    dy1 = diff(lambda t: np.real(g(z1 + 1j * t, z2)), 0.0, s)
    dx2 = diff(lambda t: np.real(g(z1, z2 + t)), 0.0, s)
    dy2 = diff(lambda t: np.real(g(z1, z2 + 1j * t)), 0.0, s)
    return (dx1 + 1j * dy1) / p, (dx2 + 1j * dy2) / p


def unitary_angle(z, w) -> float:
    """Angle between complex lines spanned by z and w, in [0, pi/2]."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    num = abs(np.vdot(w, z))
    den = float(np.linalg.norm(z) * np.linalg.norm(w))
    if den == 0:
        raise ValueError("unitary_angle needs nonzero vectors")
    return math.acos(min(1.0, num / den))


# ---------------------------------------------------------------------------
# Matrix-vector encoding of the twelve coefficients


@dataclass(frozen=True)
class MatrixVectorForm:
    """Equivalent (C, V) presentation of a cubic coefficient vector.

    C is a 3x3 matrix acting on the quadratic monomials of the moduli and
    V is a 3-vector; together they determine the twelve lambda coefficients
    uniquely and make the quadratic-form energy test linear.
    """

    C: tuple
    V: tuple

    @property
    def trace(self):
        return self.C[0][0] + self.C[1][1] + self.C[2][2]


def lambdas_to_cv(lambdas: Sequence) -> MatrixVectorForm:
    l = tuple(lambdas)
    if len(l) != 12:
        raise ValueError("expected 12 coefficients")
    (l1, l2, l3, l4, l5, l6, l7, l8, l9, l10, l11, l12) = l
    C = (
        (l2 - l3, -l1 + l8 - l9, -l7),
        (l5, -l3 + l11, -l9),
        (l6, -l4 + l5 + l12, -l10 + l11),
    )
    V = (l8 - 2 * l9, _half(-l2 + 2 * l3 - l10 + 2 * l11), l4 - 2 * l5)
    return MatrixVectorForm(C=C, V=V)


def cv_to_lambdas(mv: MatrixVectorForm) -> tuple:
    C, V = mv.C, mv.V
    t = mv.trace
    ht = _half(t)
    l1 = -(C[0][1] + C[1][2]) + V[0]
    l2 = 2 * C[0][0] - ht + V[1]
    l3 = C[0][0] - ht + V[1]
    l4 = 2 * C[1][0] + V[2]
    l5 = C[1][0]
    l6 = C[2][0]
    l7 = -C[0][2]
    l8 = -2 * C[1][2] + V[0]
    l9 = -C[1][2]
    l10 = -2 * C[2][2] + ht + V[1]
    l11 = -C[2][2] + ht + V[1]
    l12 = C[1][0] + C[2][1] + V[2]
    return (l1, l2, l3, l4, l5, l6, l7, l8, l9, l10, l11, l12)


def _criterion_matrices(mv: MatrixVectorForm):
    """The pair of 3x3 matrices whose joint kernel carries the energy test."""
    C, V = mv.C, mv.V
    t = mv.trace
    W = (
        (t - 2 * V[1], 2 * V[0], 0),
        (-V[2], t, V[0]),
        (0, -2 * V[2], t + 2 * V[1]),
    )
    return C, W


def energy_criterion(mv: MatrixVectorForm, abc: Sequence,
                     tol: float = 1e-12) -> bool:
    """Test whether the direction (a, b, c) certifies a coercive energy.

    Requires b^2 - ac < 0 (the direction must define a positive quadratic
    in the two moduli); raises ValueError otherwise.  Exact inputs are
    tested exactly, floats against tol scaled by the data.
    """
    a, b, c = abc
    disc = b * b - a * c
    exact = all(_is_exact(x) for x in abc)
    if (disc >= 0) if exact else (not disc < 0):
        raise ValueError("direction must satisfy b^2 - ac < 0")
    C, W = _criterion_matrices(mv)
    rows = [row for row in C] + [row for row in W]
    vals = [row[0] * a + row[1] * b + row[2] * c for row in rows]
    if exact and all(_is_exact(v) for row in rows for v in row):
        return all(v == 0 for v in vals)
    scale = max(1.0, max(abs(float(v)) for row in rows for v in row))
    scale *= max(1.0, abs(float(a)), abs(float(b)), abs(float(c)))
    return all(abs(float(v)) <= tol * scale for v in vals)


# ---------------------------------------------------------------------------
# Linear changes of the unknowns


def _poly_mul(p1: dict, p2: dict) -> dict:
    out: dict = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
            cur = out.get(e)
            out[e] = c1 * c2 if cur is None else cur + c1 * c2
    return out


def _substituted_monomials(minv):
    """Expansions of the six basis monomials after z = Minv v, real Minv."""
    a, b = minv[0]
    c, d = minv[1]
    z1 = {(1, 0, 0, 0): a, (0, 0, 1, 0): b}
    z1c = {(0, 1, 0, 0): a, (0, 0, 0, 1): b}
    z2 = {(1, 0, 0, 0): c, (0, 0, 1, 0): d}
    z2c = {(0, 1, 0, 0): c, (0, 0, 0, 1): d}
    base = {(1, 0): z1, (0, 1): z2}
    conj = {(1, 0): z1c, (0, 1): z2c}
    out = []
    for (i, j, k, l) in MONOMIALS:
        poly = {(0, 0, 0, 0): 1}
        for _ in range(i):
            poly = _poly_mul(poly, base[(1, 0)])
        for _ in range(j):
            poly = _poly_mul(poly, conj[(1, 0)])
        for _ in range(k):
            poly = _poly_mul(poly, base[(0, 1)])
        for _ in range(l):
            poly = _poly_mul(poly, conj[(0, 1)])
        out.append(poly)
    return out


def transform_lambdas(lambdas: Sequence, M) -> tuple:
    """Push a coefficient vector forward through v = M z, real invertible M.

    The returned system is satisfied by M u whenever u satisfies the
    original one.  Exact inputs give exact outputs.
    """
    (m11, m12), (m21, m22) = M[0], M[1]
    for entry in (m11, m12, m21, m22):
        if isinstance(entry, complex):
            raise ValueError("transform matrix must be real")
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise ValueError("transform matrix must be invertible")
    if all(_is_exact(x) for x in (m11, m12, m21, m22)):
        inv_det = Fraction(1) / Fraction(det)
    else:
        inv_det = 1 / det
    minv = ((m22 * inv_det, -m12 * inv_det),
            (-m21 * inv_det, m11 * inv_det))
    monos = _substituted_monomials(minv)
    index = {e: i for i, e in enumerate(MONOMIALS)}
    rows = [lambdas[:6], lambdas[6:]]
    out = [0] * 12
    Mrows = ((m11, m12), (m21, m22))
    for jout in range(2):
        acc: dict = {}
        for ksrc in range(2):
            w = Mrows[jout][ksrc]
            if w == 0:
                continue
            for i, coeff in enumerate(rows[ksrc]):
                if coeff == 0:
                    continue
                for e, c in monos[i].items():
                    cur = acc.get(e)
                    val = w * coeff * c
                    acc[e] = val if cur is None else cur + val
        for e, c in acc.items():
            out[6 * jout + index[e]] = c
    return tuple(out)


def transform_system(system: System, M) -> System:
    """Apply a real linear change of unknowns to a cubic system."""
    if system.kind != "lambda":
        raise ValueError("only cubic coefficient systems can be transformed")
    return from_lambdas(transform_lambdas(system.lambdas, M), d=system.d)


def diagonal_phase_transform(system: System) -> System:
    """Change of unknowns (u1, u2) -> (u1, i u2).

    Only defined when the coefficients of the monomials that pick up a
    stray phase all vanish; then the transform flips the sign of the
    two conjugate-quadratic couplings.
    """
    if system.kind != "lambda":
        raise ValueError("only cubic coefficient systems can be transformed")
    lam = system.lambdas
    blockers = [lam[i] for i in (1, 2, 5, 6, 9, 10)]
    scale = max(1.0, max(abs(float(v)) for v in lam))
    for v in blockers:
        ok = v == 0 if _is_exact(v) else abs(float(v)) <= 1e-12 * scale
        if not ok:
            raise ValueError(
                "phase transform undefined: mixed-phase couplings present")
    out = list(lam)
    out[4] = -lam[4]
    out[8] = -lam[8]
    for i in (1, 2, 5, 6, 9, 10):
        out[i] = 0
    return from_lambdas(tuple(out), d=system.d)


# ---------------------------------------------------------------------------
# Serialisation


def system_to_dict(system: System) -> dict:
    if system.form is not None:
        return {
            "standard_form": system.form,
            "params": {k: (v if isinstance(v, int) else float(v))
                       for k, v in system.params.items()},
            "d": system.d,
        }
    if system.kind == "lambda":
        return {
            "lambdas": [v if isinstance(v, int) else float(v)
                        for v in system.lambdas],
            "d": system.d,
            "p": float(system.p),
            "n": [int(m) for m in system.n],
        }
    raise ValueError("custom systems have no dictionary form")


def system_from_dict(data: dict) -> System:
    if "standard_form" in data:
        return make_standard(data["standard_form"], dict(data["params"]),
                             d=int(data.get("d", 1)))
    if "lambdas" in data:
        lam = list(data["lambdas"])
        d = int(data.get("d", 1))
        p = float(data.get("p", 4.0))
        n = tuple(data.get("n", (1, 1)))
        if p != 4.0 or tuple(n) != (1, 1):
            raise ValueError("coefficient systems are cubic with n = (1, 1)")
        return from_lambdas(lam, d=d)
    raise ValueError("system dictionary needs 'standard_form' or 'lambdas'")
