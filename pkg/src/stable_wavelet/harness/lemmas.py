"""Deterministic checks of elementary inequalities and of a double integral bound.

``verify_lemma53`` samples inputs from a heavy-tailed proposal and checks

    |x1^<a-1> - x2^<a-1>| <= 2 |x2|^(a-2) |x1 - x2|        (x2 != 0)
    |x1^<a-1> - x2^<a-1>| <= 2 |x1 - x2|^(a-1)
    ||x + y|^a - |x|^a - |y|^a| <= 2 |x y|^(a/2)

``verify_lemma52`` evaluates

    I0(r) = int_0^inf int_0^inf |r u - v|^(a-2) F(u) F(v) du dv,
    F(u) = u^-beta (u < 1/b),  b^(beta-1) / u (u >= 1/b),

by nested adaptive quadrature and checks that ``I0`` stays within a
bounded factor of ``b^(2 beta - a) (1 + r^(a-2))``.
"""
from __future__ import annotations

import time
import warnings
from typing import Sequence

import numpy as np
from scipy import integrate, special

from ..errors import DiagnosticsError, ParameterError
from ..stable_core import RngStream
from .report import McReport, Verdict

__all__ = ["lemma53_terms", "verify_lemma53", "lemma52_integral", "verify_lemma52", "REL_SLACK"]

# floating-point slack: the right-hand sides are compared after rounding
REL_SLACK = 1e-12
_CHUNK = 1 << 17


def _spow(x, p):
    return np.sign(x) * np.abs(x) ** p


def _spow_diff(x1, x2, p):
    """``x1^<p> - x2^<p>`` without cancellation when ``x1`` and ``x2`` are close."""
    ax1, ax2 = np.abs(x1), np.abs(x2)
    # only same-sign values within a factor 2 cancel; elsewhere the direct form is exact enough
    same = (np.sign(x1) == np.sign(x2)) & (x2 != 0) & (ax1 <= 2.0 * ax2) & (ax2 <= 2.0 * ax1)
    a2 = np.where(same, ax2, 1.0)
    rel = np.where(same, (ax1 - ax2) / a2, 0.0)
    close = np.sign(x2) * a2 ** p * np.expm1(p * np.log1p(rel))
    return np.where(same, close, _spow(x1, p) - _spow(x2, p))


def _additivity_gap(x1, x2, a):
    """``|x1 + x2|^a - |x1|^a - |x2|^a`` without cancellation.

    With ``|big| >= |small|`` and ``t = small / big`` in ``[-1, 1]``,
    ``|x1 + x2|^a - |big|^a = |big|^a expm1(a log1p(t))``.
    """
    swap = np.abs(x1) < np.abs(x2)
    big = np.where(swap, x2, x1)
    small = np.where(swap, x1, x2)
    nz = big != 0
    t = np.where(nz, small / np.where(nz, big, 1.0), 0.0)
    gap = np.abs(big) ** a * np.expm1(a * np.log1p(t)) - np.abs(small) ** a
    return np.where(nz, gap, 0.0)


def lemma53_terms(x1, x2, alpha: float) -> dict:
    """Left and right sides of the three inequalities (vectorised).

    Keys ``local_lipschitz``, ``holder`` and ``power_additivity`` follow the
    order above; ``local_lipschitz`` entries are ``nan`` where ``x2 == 0``.
    Differences of powers are evaluated in a cancellation-free form.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    a = float(alpha)
    out = {}
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if 1.0 < a < 2.0:
            d = np.abs(_spow_diff(x1, x2, a - 1.0))
            gap = np.abs(x1 - x2)
            rhs6 = np.where(x2 != 0, 2.0 * np.abs(x2) ** (a - 2.0) * gap, np.nan)
            out["local_lipschitz"] = (np.where(x2 != 0, d, np.nan), rhs6)
            out["holder"] = (d, 2.0 * gap ** (a - 1.0))
        if 0.0 < a < 2.0:
            lhs = np.abs(_additivity_gap(x1, x2, a))
            # separate powers: the product x1 x2 underflows long before either factor
            rhs8 = 2.0 * np.abs(x1) ** (a / 2.0) * np.abs(x2) ** (a / 2.0)
            out["power_additivity"] = (lhs, rhs8)
    return out


def _violations(lhs, rhs):
    ok = np.isfinite(lhs) & np.isfinite(rhs)
    # both sides carry a few ulps of rounding; the third inequality is tight at x2 = -x1
    bad = ok & (lhs > rhs * (1.0 + REL_SLACK) + 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ok & (rhs > 0), lhs / rhs, np.where(ok & (lhs == 0), 0.0, np.nan))
    return int(bad.sum()), float(np.nanmax(ratio)) if np.any(np.isfinite(ratio)) else 0.0, int(ok.sum())


def _proposal(rng: np.random.Generator, n: int) -> tuple:
    """Heavy-tailed pairs with edge cases mixed in."""
    mag = 10.0 ** rng.uniform(-6.0, 6.0, (2, n))
    sgn = rng.choice([-1.0, 1.0], (2, n))
    x1, x2 = sgn * mag
    kind = rng.integers(0, 10, n)
    x2 = np.where(kind == 0, -x1, x2)                                       # opposite
    x2 = np.where(kind == 1, x1 * (1.0 + 10.0 ** rng.uniform(-8, -1, n)), x2)  # near-equal
    x2 = np.where(kind == 2, x1 * rng.uniform(-2.0, 2.0, n), x2)           # same order
    x1 = np.where(kind == 3, 0.0, x1)                                        # zero
    x2 = np.where(kind == 4, 0.0, x2)
    return x1, x2


def verify_lemma53(n: int = 10 ** 6, alphas: Sequence[float] = (1.1, 1.5, 1.9), seed: int = 0,
                   config_id: str = "lemma53") -> McReport:
    """Randomised check of the three inequalities; zero violations required.

    The first two are checked for ``alpha`` in ``(1, 2)``, the third for
    ``alpha`` in ``(0, 2)``.  ``max_ratio`` (largest lhs/rhs) is the
    smallest relative slack seen.
    """
    t0 = time.perf_counter()
    alphas = [float(a) for a in alphas]
    for a in alphas:
        if not 0.0 < a < 2.0:
            raise ParameterError(f"alpha must lie in (0, 2), got {a}")
    rep = McReport("lemma53", config_id, {"n": int(n), "alphas": alphas}, seed)
    res = {}
    for ia, a in enumerate(alphas):
        rng = RngStream(seed, ia).generator()
        acc = {}
        done = 0
        while done < n:
            m = min(_CHUNK, n - done)
            x1, x2 = _proposal(rng, m)
            for name, (lhs, rhs) in lemma53_terms(x1, x2, a).items():
                v, r, c = _violations(lhs, rhs)
                cur = acc.setdefault(name, [0, 0.0, 0])
                cur[0] += v
                cur[1] = max(cur[1], r)
                cur[2] += c
            done += m
        res[str(a)] = {k: {"violations": v[0], "max_ratio": v[1], "checked": v[2]}
                       for k, v in acc.items()}
        for name, v in acc.items():
            rep.verdicts.append(Verdict.check(
                f"{name}@alpha={a:g}", v[0] == 0, v[0], 0, None,
                "no violation (lhs <= rhs up to 1e-12 relative rounding)", max_ratio=v[1],
                checked=v[2]))
    rep.summaries = res
    rep.runtime = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# double integral


def _F(u, beta, b):
    c = 1.0 / b
    return u ** -beta if u < c else b ** (beta - 1.0) / u


def _quad(f, lo, hi, wvar=None, epsrel=1e-10):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if wvar is None:
                val, err = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=epsrel, limit=400)
            else:
                val, err = integrate.quad(f, lo, hi, weight="alg", wvar=wvar, epsabs=0.0,
                                          epsrel=epsrel, limit=400)
        except integrate.IntegrationWarning as exc:
            raise DiagnosticsError(f"quadrature did not converge on [{lo}, {hi}]: {exc}") from exc
    return val, err


def _graded(pts, s):
    """Consecutive intervals of ``pts``, refined geometrically toward ``s``
    where ``s`` lies just outside an interval (close to the kink)."""
    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo == s or hi == s or not (s < lo or s > hi):
            out.append((lo, hi))
            continue
        d = lo - s if s < lo else s - hi
        if d >= 0.1 * (hi - lo):
            out.append((lo, hi))
            continue
        edges = [lo, hi]
        step = d
        while step < 0.5 * (hi - lo):
            edges.append(lo + step if s < lo else hi - step)
            step *= 4.0
        edges = sorted(set(edges))
        out.extend(zip(edges[:-1], edges[1:]))
    return out


def _inner(s, alpha, beta, b, epsrel):
    """``J(s) = int_0^inf |s - v|^(alpha-2) F(v) dv`` and its error bound."""
    e = alpha - 2.0
    c = 1.0 / b
    pts = sorted({0.0, c, s, 2.0 * max(s, c)})
    total = 0.0
    err = 0.0
    for lo, hi in _graded(pts, s):
        first = hi <= c
        le = -beta if (lo == 0.0 and first) else (e if lo == s else 0.0)
        re = e if hi == s else 0.0
        sing_s = lo == s or hi == s

        def g(v, first=first, sing_s=sing_s, lo=lo):
            fv = 1.0 if (first and lo == 0.0) else _F(v, beta, b)
            return fv if sing_s else fv * abs(s - v) ** e

        if le == 0.0 and re == 0.0:
            val, er = _quad(g, lo, hi, epsrel=epsrel)
        else:
            val, er = _quad(g, lo, hi, wvar=(le, re), epsrel=epsrel)
        total += val
        err += er
    # int_V^inf (v - s)^e / v dv = s^e B(s/V; -e, 1+e), exact
    x = s / pts[-1]
    tail = b ** (beta - 1.0) * s ** e * special.betainc(-e, 1.0 + e, x) * special.beta(-e, 1.0 + e)
    return total + float(tail), err


def lemma52_integral(alpha: float, beta: float, b: float, r: float, epsrel: float = 1e-8) -> dict:
    """``I0(r)`` for the given ``b`` with an error estimate.

    The inner integral is split at ``v = r u`` (and at the kink ``1/b``) and
    each singular endpoint is absorbed into an algebraic quadrature weight.
    The outer integral is split at ``1/b`` and ``1/(r b)``; near ``u = 0`` a
    power substitution removes the leading singularity.

    Raises
    ------
    DiagnosticsError
        If any quadrature fails to converge or the combined relative error
        exceeds ``1e-6``.
    """
    a, beta, b, r = float(alpha), float(beta), float(b), float(r)
    if not 1.0 < a < 2.0:
        raise ParameterError(f"alpha must lie in (1, 2), got {a}")
    if not 0.0 < beta < a / 2.0:
        raise ParameterError(f"beta must lie in (0, alpha/2), got {beta}")
    if b < 1.0 or r <= 0.0:
        raise ParameterError("need b >= 1 and r > 0")
    inner_tol = epsrel * 1e-2
    c = 1.0 / b
    errs = []

    def outer(u):
        j, e = _inner(r * u, a, beta, b, inner_tol)
        errs.append(e / max(j, 1e-300))
        return _F(u, beta, b) * j

    # near 0: F(u) ~ u^-beta and J(ru) ~ (ru)^min(0, a-1-beta)
    lead = -beta + min(0.0, a - 1.0 - beta)
    pts = sorted({0.0, c, c / r, 2.0 * max(c, c / r)})
    total = 0.0
    err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo == 0.0:
            # u = t^k with k (1 + lead) = 1 turns the leading power into t^0
            k = 1.0 / (1.0 + lead)
            val, er = _quad(lambda t: outer(t ** k) * k * t ** (k - 1.0), 0.0, hi ** (1.0 / k),
                            epsrel=epsrel)
        else:
            val, er = _quad(outer, lo, hi, epsrel=epsrel)
        total += val
        err += er
    val, er = _quad(outer, pts[-1], np.inf, epsrel=epsrel)
    total += val
    err += er
    rel = err / total + (max(errs) if errs else 0.0)
    if not (np.isfinite(total) and rel <= 1e-6):
        raise DiagnosticsError(f"I0 quadrature relative error {rel:.2e} exceeds 1e-6")
    return {"value": float(total), "rel_error": float(rel)}


def verify_lemma52(alpha: float = 1.5, beta: float = 0.5, b_values: Sequence[float] = (1, 2, 4),
                   r_values: Sequence[float] = (0.1, 1, 10), spread: float = 10.0,
                   scaling_rtol: float = 1e-6, config_id: str = "lemma52") -> McReport:
    """Boundedness of ``I0(r) / (b^(2 beta - alpha) (1 + r^(alpha-2)))``.

    Verdicts: every ``I0 > 0``; the ratio varies by less than ``spread``
    across the ``(b, r)`` grid; ``I0(b, r) = b^(2 beta - alpha) I0(1, r)``
    within ``scaling_rtol`` (each value computed independently).
    """
    t0 = time.perf_counter()
    cfg = {"alpha": alpha, "beta": beta, "b_values": list(map(float, b_values)),
           "r_values": list(map(float, r_values)), "spread": spread, "scaling_rtol": scaling_rtol}
    rep = McReport("lemma52", config_id, cfg, None)
    rows = []
    base = {}
    for r in r_values:
        base[float(r)] = lemma52_integral(alpha, beta, 1.0, r)["value"]
    for b in b_values:
        for r in r_values:
            res = base[float(r)] if float(b) == 1.0 else lemma52_integral(alpha, beta, b, r)["value"]
            bound = b ** (2 * beta - alpha) * (1.0 + r ** (alpha - 2.0))
            scaled = b ** (2 * beta - alpha) * base[float(r)]
            rows.append({"b": float(b), "r": float(r), "I0": res, "ratio": res / bound,
                         "scaling_rel_diff": abs(res - scaled) / scaled})
    ratios = np.array([x["ratio"] for x in rows])
    rep.summaries = {"grid": rows}
    rep.verdicts = [
        Verdict.check("positive", bool(np.all([x["I0"] > 0 for x in rows])),
                      min(x["I0"] for x in rows), 0.0, None, "I0 > 0 on the grid"),
        Verdict.check("bounded_ratio", ratios.max() / ratios.min() < spread,
                      ratios.max() / ratios.min(), None, spread, "max ratio / min ratio < spread"),
        Verdict.check("scaling_identity",
                      max(x["scaling_rel_diff"] for x in rows) <= scaling_rtol,
                      max(x["scaling_rel_diff"] for x in rows), 0.0, scaling_rtol,
                      "|I0(b,r) - b^(2beta-alpha) I0(1,r)| / scaled <= rtol"),
    ]
    rep.runtime = time.perf_counter() - t0
    return rep
