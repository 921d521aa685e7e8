"""Recognition of the five standard cubic forms up to real linear changes.

Given an arbitrary twelve-coefficient cubic system, search the group of
real changes of unknowns v = M u (rotations, diagonal scalings, the swap,
and their compositions) for an M that carries the system onto one of the
standard parametrized families.  The search is best effort: failure to
match within the budget is reported as such and is not a proof of
non-membership.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .systems import (MatrixVectorForm, System, _criterion_matrices,
                      lambdas_to_cv, standard_lambdas, transform_lambdas)

__all__ = [
    "KernelReport", "MatchResult", "NotInClassError", "rank_and_kernel",
    "admissible_direction", "structure_invariants", "match_standard_form",
]

_COERCIVITY = np.array([[0.0, 0.0, -0.5],
                        [0.0, 1.0, 0.0],
                        [-0.5, 0.0, 0.0]])


class NotInClassError(ValueError):
    """No coercive direction exists, so no standard form can match."""


@dataclass(frozen=True)
class KernelReport:
    rank: int
    kernel: tuple
    coercive: tuple | None


def _coercive_in_span(basis: np.ndarray, tol: float = 1e-9):
    """A unit vector v in the span with v_b^2 - v_a v_c < 0, or None."""
    if basis.size == 0:
        return None
    K = basis.T  # columns span the space
    Qr = K.T @ _COERCIVITY @ K
    vals, vecs = np.linalg.eigh(Qr)
    if vals[0] >= -tol:
        return None
    v = K @ vecs[:, 0]
    v = v / np.linalg.norm(v)
    if v[0] + v[2] < 0:
        v = -v
    return tuple(float(x) for x in v)


def rank_and_kernel(mv: MatrixVectorForm, tol: float = 1e-9) -> KernelReport:
    """Rank of the coefficient matrix, its kernel, and a coercive vector.

    The kernel refers to the 3x3 matrix alone; the returned coercive
    vector lies in that kernel and satisfies b^2 - ac < 0.  Full
    admissibility additionally requires the companion weight matrix to
    annihilate the vector, which energy_criterion checks.
    """
    C = np.array(mv.C, dtype=float)
    sv = np.linalg.svd(C, compute_uv=False)
    scale = max(1.0, float(sv[0]))
    rank = int(np.sum(sv > tol * scale))
    _, s, vt = np.linalg.svd(C)
    kernel = vt[s <= tol * scale] if rank else np.eye(3)
    coercive = _coercive_in_span(np.atleast_2d(kernel), tol)
    return KernelReport(rank,
                        tuple(tuple(float(x) for x in row)
                              for row in np.atleast_2d(kernel)),
                        coercive)


def admissible_direction(system: System, tol: float = 1e-9):
    """Coercive (a, b, c) killed by both criterion matrices, or None."""
    mv = lambdas_to_cv(system.lambdas)
    C, W = _criterion_matrices(mv)
    stack = np.vstack([np.array(C, dtype=float), np.array(W, dtype=float)])
    _, s, vt = np.linalg.svd(stack)
    scale = max(1.0, float(s[0]))
    kernel = vt[np.concatenate([s, np.zeros(3 - len(s))]) <= tol * scale]
    return _coercive_in_span(np.atleast_2d(kernel), tol)


# ---------------------------------------------------------------------------
# Structure invariants used as a cheap rejection filter


def structure_invariants(system: System) -> dict:
    """Minimum value, orbit-family count, and pairwise generator angles."""
    from .sphere import gmin_numeric
    from .systems import unitary_angle

    result = gmin_numeric(system)
    value, families = result.value, result.families
    gens = [f.generator for f in families if f.kind == "point"]
    angles = sorted(
        unitary_angle(gens[i], gens[j])
        for i in range(len(gens)) for j in range(i + 1, len(gens)))
    return {
        "g_min": value,
        "n_orbits": len(families),
        "angles": tuple(angles),
        "kinds": tuple(sorted(f.kind for f in families)),
    }


# ---------------------------------------------------------------------------
# Matching against the standard forms


@dataclass(frozen=True)
class MatchResult:
    form: str
    params: dict
    M: tuple
    residual: float


_TAGS = ("NLS1", "NLS2", "NLS3", "NLS4", "NLS5")


def _fit_tag(tag: str, lam: np.ndarray):
    """Best parameters of one standard family for a transformed vector.

    Returns (params, scale) where scale q > 0 means the vector should be
    divided by q (equivalently M multiplied by sqrt(q)) to meet the
    family normalization, or None when no sensible fit exists.
    """
    l1, l2, l3, l4, l5, l6, l7, l8, l9, l10, l11, l12 = lam
    if tag in ("NLS1", "NLS2"):
        q = max(abs(l1), abs(l12), abs(l4))
        if q < 1e-14:
            return ({"alpha": 0, "beta": 0}, 1.0) if tag == "NLS1" else None
        v1, v4, v12 = l1 / q, l4 / q, l12 / q
        if tag == "NLS1":
            alpha, beta = round(v1), round(v12)
            if not (alpha >= beta and {alpha, beta} <= {-1, 0, 1}):
                return None
            return {"alpha": alpha, "beta": beta}, q
        sigma = 1 if v4 > 0 else -1
        alpha = round(v1 - sigma)
        beta = round(v12 - sigma)
        if not (alpha >= beta and {alpha, beta} <= {-1, 0, 1}):
            return None
        return {"alpha": alpha, "beta": beta, "sigma": sigma}, q
    # the three continuous families share the (A, B, Cc) extraction
    A = (l1 + l12) / 2
    B = (l4 + l8) / 2
    Cc = (l5 + l9) / 2
    r = B - 2 * Cc
    a1 = (A - B + 3 * Cc) / 4
    a2 = a1 - Cc
    if tag == "NLS3":
        # alpha2 of either sign: the 45-degree rotation symmetry flips it
        q = math.hypot(a1, a2)
        if q < 1e-12:
            return None
        return {"alpha1": float(a1 / q), "alpha2": float(a2 / q),
                "r": float(r / q)}, q
    if tag == "NLS4":
        a3 = (l1 - l12) / 4
        q = math.sqrt(a1 * a1 + a2 * a2 + a3 * a3)
        if q < 1e-12 or a3 < 1e-3 * q:
            return None
        return {"alpha1": float(a1 / q), "alpha2": float(a2 / q),
                "alpha3": float(a3 / q), "r": float(r / q)}, q
    # NLS5: two mixed couplings determine alpha3 and eta
    P = (l2 / 2 + l3 + l6 + l7 + l11 + l10 / 2) / 6
    Qc = (l1 - l12) / 4
    a3 = math.hypot(P, Qc)
    q = math.sqrt(a1 * a1 + a2 * a2 + a3 * a3)
    if q < 1e-12 or a3 < 1e-3 * q or a2 < 1e-6 * q or P < 0:
        return None
    eta = math.atan2(P, Qc)
    if not 1e-9 < eta < math.pi - 1e-9:
        return None
    if eta > math.pi / 2 and a1 <= 0:
        return None
    return {"alpha1": float(a1 / q), "alpha2": float(a2 / q),
            "alpha3": float(a3 / q), "eta": float(eta),
            "r": float(r / q)}, q


def _tag_residual(tag: str, lam: np.ndarray):
    fit = _fit_tag(tag, lam)
    if fit is None:
        return math.inf, None, 1.0
    params, q = fit
    target = np.array([float(v) for v in standard_lambdas(tag, params)])
    res = float(np.max(np.abs(lam / q - target)))
    return res, params, q


def _rot(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def _assemble(nu, ls, lt, mu, swap):
    M = _rot(nu) @ np.diag([math.exp(ls), math.exp(lt)]) @ _rot(mu)
    if swap:
        M = M @ np.array([[0.0, 1.0], [1.0, 0.0]])
    return M


def _push(lambdas, M):
    out = transform_lambdas(lambdas, ((M[0, 0], M[0, 1]),
                                      (M[1, 0], M[1, 1])))
    return np.array([float(v) for v in out])


def _params_key(params: dict):
    return tuple((k, round(float(v), 12)) for k, v in sorted(params.items()))


def match_standard_form(system: System, search_budget: int = 40000,
                        residual_tol: float = 1e-8):
    """Search for M carrying the system onto a standard form.

    Returns a MatchResult or None when the budget is exhausted without a
    residual below tolerance.  Raises NotInClassError when no coercive
    quadratic direction exists at all (then no standard form can match).
    """
    if system.kind != "lambda":
        raise ValueError("only cubic coefficient systems can be classified")
    if admissible_direction(system) is None:
        raise NotInClassError("no admissible (a, b, c) direction exists")
    lambdas = system.lambdas
    lam0 = np.array([float(v) for v in lambdas])

    candidates = []

    # identity fast path: already in a standard parametrization
    for tag in _TAGS:
        res, params, _q = _tag_residual(tag, lam0)
        if params is not None and res <= residual_tol:
            candidates.append((res, tag, params, np.eye(2)))
    if candidates:
        return _finish(candidates, lambdas, residual_tol)

    # coarse grid over the SVD-style factorization
    n_ang = 12
    n_scale = 5
    angs = [i * math.pi / n_ang for i in range(n_ang)]
    logs = np.linspace(math.log(0.25), math.log(4.0), n_scale)
    grid = list(itertools.product(angs, logs, logs, angs, (False, True)))
    if len(grid) > search_budget:
        stride = len(grid) / search_budget
        grid = [grid[int(i * stride)] for i in range(search_budget)]
    best_per_tag: dict = {}
    for nu, ls, lt, mu, swap in grid:
        lam = _push(lambdas, _assemble(nu, ls, lt, mu, swap))
        for tag in _TAGS:
            res, params, _q = _tag_residual(tag, lam)
            if params is None:
                continue
            cur = best_per_tag.get((tag, swap))
            if cur is None or res < cur[0]:
                best_per_tag[(tag, swap)] = (res, (nu, ls, lt, mu, swap))

    # polish every family from a shared pool of good starts, so the
    # tie-break can prefer the smallest family containing the system
    by_tag: dict = {}
    for (tag, _swap), (res0, x0) in best_per_tag.items():
        if tag not in by_tag or res0 < by_tag[tag][0]:
            by_tag[tag] = (res0, x0)
    pool = [x0 for _res, x0 in
            sorted(by_tag.values(), key=lambda v: v[0])][:3]
    for tag in _TAGS:
        own = by_tag.get(tag)
        starts = []
        if own is not None and own[0] <= 1.5:
            starts.append(own[1])
        starts.extend(x0 for x0 in pool if x0 not in starts)
        for x0 in starts[:4]:
            swap = x0[4]

            def objective(x, tag=tag, swap=swap):
                if not np.all(np.isfinite(x)) or max(abs(x[1]),
                                                     abs(x[2])) > 50:
                    return 1e6  # keep the scale factors representable
                lam = _push(lambdas, _assemble(x[0], x[1], x[2], x[3], swap))
                res = _tag_residual(tag, lam)[0]
                return res if math.isfinite(res) else 1e6

            xcur = np.array(x0[:4])
            res = math.inf
            for _round in range(2):
                sol = minimize(objective, xcur, method="Nelder-Mead",
                               options={"xatol": 1e-12, "fatol": 1e-14,
                                        "maxiter": 4000, "maxfev": 6000})
                xcur = sol.x
                res = sol.fun
                if res <= residual_tol:
                    break
            if res <= residual_tol:
                M = _assemble(xcur[0], xcur[1], xcur[2], xcur[3], swap)
                lam = _push(lambdas, M)
                res, params, q = _tag_residual(tag, lam)
                if params is not None and res <= residual_tol:
                    candidates.append((res, tag, params, math.sqrt(q) * M))
                    break
    if candidates:
        return _finish(candidates, lambdas, residual_tol)
    return None


def _finish(candidates, lambdas, residual_tol):
    candidates.sort(key=lambda c: (round(c[0], 12), c[1],
                                   _params_key(c[2])))
    res, tag, params, M = candidates[0]
    lam = _push(lambdas, M)
    res_final, params_final, q = _tag_residual(tag, lam)
    if abs(q - 1.0) > 1e-14:
        M = math.sqrt(q) * M
        lam = _push(lambdas, M)
        res_final, params_final, _ = _tag_residual(tag, lam)
    return MatchResult(tag, params_final,
                       tuple(tuple(float(x) for x in row) for row in M),
                       res_final)
