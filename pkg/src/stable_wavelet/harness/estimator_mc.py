"""Monte-Carlo checks of the wavelet estimators of ``H`` and of the joint CLT
of per-octave sums of wavelet coefficients.

Each replicate synthesises the coefficients of one LFSM sample of the
largest length; shorter lengths use its leading coefficients, so all
``N`` share common random numbers.
"""
from __future__ import annotations

import time
from typing import Optional, Sequence

import numpy as np

from ..errors import ConfigurationError, ParameterError
from ..estimators import (
    _cross_cov,
    _lag_range,
    estimate_H_log,
    estimate_H_power,
    ols_weights,
    sigma2_total,
    sigma_matrix,
)
from ..lfsm_wavelet.kernel import LfsmSpec, clt_condition
from ..lfsm_wavelet.synthesis import LfsmSynthesizer, SynthesisConfig, _replicate_draws
from ..lfsm_wavelet.wavelets import WaveletSpec
from ..stable_core import RngStream
from .functionals import FunctionalSpec
from .normality import ad_normality
from .report import McReport, Verdict, fit_loglog

__all__ = ["synthesize_grids", "run_estimator_mc", "run_multiscale_clt"]


def synthesize_grids(lfsm: LfsmSpec, wavelet: WaveletSpec, octaves: Sequence[int], N: int, R: int,
                     seed: int, threads: int = 1, path: bool = False, **synth_kw) -> tuple:
    """``R`` independent replicates (stream ``i`` for replicate ``i``).

    Returns
    -------
    (draws, synth)
        ``draws`` is a list of ``(path, grid)`` pairs.
    """
    octaves = sorted(int(j) for j in octaves)
    cfg = SynthesisConfig(N=int(N), j_min=octaves[0], j_max=octaves[-1], seed=int(seed), **synth_kw)
    synth = LfsmSynthesizer(lfsm, cfg, wavelet, path=path, coeffs=True)
    draws = _replicate_draws(synth, [RngStream(seed, i) for i in range(int(R))], threads)
    return draws, synth


def run_estimator_mc(lfsm: LfsmSpec, wavelet: WaveletSpec, octaves: Sequence[int] = (1, 2, 3, 4, 5),
                     N_values: Sequence[int] = (2 ** 12, 2 ** 13, 2 ** 14, 2 ** 15), R: int = 200,
                     seed: int = 0, method: str = "log", beta: Optional[float] = None,
                     N_ref: Optional[int] = None, lag_cap: Optional[int] = None, threads: int = 1,
                     bias_tol: float = 0.03, ad_level: float = 0.01, slope_target: float = -1.0,
                     slope_tol: float = 0.2, plugin_factor: float = 2.0,
                     config_id: str = "estimator", synth_kw: Optional[dict] = None) -> McReport:
    """Replicate distribution of ``H_hat`` for several sample sizes.

    Verdicts at ``N_ref`` (default ``2^14`` when present, else the largest
    ``N``): ``|mean H_hat - H| <= bias_tol``; Anderson–Darling p-value of
    ``sqrt(N)(H_hat - H)`` above ``ad_level``; plug-in ``sigma2_hat``
    within a factor ``plugin_factor`` of ``N Var(H_hat)``.  Over all ``N``:
    the log-log slope of ``Var(H_hat)`` against ``N`` within
    ``slope_target +- slope_tol``.
    """
    t0 = time.perf_counter()
    octaves = sorted(int(j) for j in octaves)
    N_values = sorted(int(n) for n in N_values)
    if method not in ("log", "power"):
        raise ParameterError(f"unknown method {method!r}")
    if N_ref is None:
        N_ref = 2 ** 14 if 2 ** 14 in N_values else N_values[-1]
    if N_ref not in N_values:
        raise ConfigurationError("N_ref must be one of the N values")
    w = ols_weights(octaves)
    cond = clt_condition(lfsm.alpha, lfsm.H, wavelet.Q)
    cfg = {"alpha": lfsm.alpha, "H": lfsm.H, "wavelet": wavelet.name, "Q": wavelet.Q,
           "r": wavelet.r, "octaves": octaves, "N_values": N_values, "R": int(R), "method": method,
           "beta": beta, "N_ref": N_ref, "lag_cap": lag_cap, "bias_tol": bias_tol,
           "ad_level": ad_level, "slope_target": slope_target, "slope_tol": slope_tol,
           "plugin_factor": plugin_factor, "synth_kw": synth_kw or {}}
    rep = McReport("estimator", config_id, cfg, seed)
    if not cond["satisfied"]:
        rep.hypothesis_unmet.append(
            f"Q - H > 1/(alpha(alpha-1)) fails: {cond['lhs']:.4g} <= {cond['rhs']:.4g}")
    draws, synth = synthesize_grids(lfsm, wavelet, octaves, N_values[-1], R, seed, threads,
                                    **(synth_kw or {}))

    def est(g):
        if method == "log":
            return estimate_H_log(g, w).H_hat
        return estimate_H_power(g, w, beta, lfsm.alpha).H_hat

    per_n = []
    ref_grids = None
    for N in N_values:
        grids = [d[1].prefix(N) for d in draws]
        h = np.array([est(g) for g in grids])
        z = np.sqrt(N) * (h - lfsm.H)
        a2, p = ad_normality(z)
        per_n.append({"N": N, "mean": float(h.mean()), "bias": float(h.mean() - lfsm.H),
                      "var": float(h.var(ddof=1)), "N_var": float(N * h.var(ddof=1)),
                      "ad_A2": a2, "ad_p": p, "counts": grids[0].counts})
        rep.add_records(h, N, "H_hat")
        if N == N_ref:
            ref_grids = grids
    R = int(R)
    fit = fit_loglog([d["N"] for d in per_n], [d["var"] for d in per_n],
                     se_log_y=[np.sqrt(2.0 / (R - 1))] * len(per_n))
    S, _ = sigma_matrix(ref_grids, octaves, lag_cap=lag_cap, method=method, beta=beta,
                        alpha=lfsm.alpha)
    s2 = sigma2_total(S, w)
    ref = next(d for d in per_n if d["N"] == N_ref)
    ratio = s2 / ref["N_var"] if ref["N_var"] > 0 else float("inf")
    rep.summaries = {
        "per_N": per_n,
        "variance_slope": fit.to_dict(),
        "sigma_matrix": np.asarray(S).tolist(),
        "sigma2_plugin": s2,
        "plugin_ratio": ratio,
        "clt_condition": cond,
        "coef_scale": {str(j): synth.coef_scale(j) for j in octaves},
    }
    rep.verdicts = [
        Verdict.check("bias", abs(ref["bias"]) <= bias_tol, ref["bias"], 0.0, bias_tol,
                      "|mean H_hat - H| <= tolerance at N_ref"),
        Verdict.check("normality", ref["ad_p"] > ad_level, ref["ad_p"], ad_level, None,
                      "Anderson-Darling p > level at N_ref"),
        Verdict.check("variance_slope", abs(fit.slope - slope_target) <= slope_tol, fit.slope,
                      slope_target, slope_tol, "|slope - target| <= tolerance", slope_se=fit.se),
        Verdict.check("plugin_variance", 1.0 / plugin_factor <= ratio <= plugin_factor, ratio, 1.0,
                      plugin_factor, "sigma2_hat / (N Var H_hat) within [1/factor, factor]"),
    ]
    rep.runtime = time.perf_counter() - t0
    return rep


def run_multiscale_clt(lfsm: LfsmSpec, wavelet: WaveletSpec, octaves: Sequence[int] = (1, 2),
                       K=None, N: int = 2 ** 14, R: int = 300, seed: int = 0,
                       lag_cap: Optional[int] = None, threads: int = 1, ad_level: float = 0.01,
                       n_se: float = 3.0, config_id: str = "multiscale",
                       synth_kw: Optional[dict] = None) -> McReport:
    """Joint law of ``Y_j = N_j^(-1/2) sum_n (K_j(d_{j,n}) - E K_j(d_{j,n}))``.

    ``K`` is one ``FunctionalSpec`` for all octaves or a dict keyed by
    octave (default ``log2abs``).  The empirical ``Cov(Y_j, Y_k)`` is
    compared with the truncated series
    ``2^((j-k)/2) sum_n Cov(K_j(d_{j,n}), K_k(d_{k,0}))`` estimated from the
    same replicates; each entry must agree within ``n_se`` standard errors.
    Pairs ``(j, k)`` and ``(j+1, k+1)`` must also agree (the series depends
    on ``k - j`` only, which fixes the ``2^((j-k)/2)`` prefactor).
    """
    t0 = time.perf_counter()
    octaves = sorted(int(j) for j in octaves)
    if K is None:
        K = FunctionalSpec("log2abs")
    Ks = {j: (K[j] if isinstance(K, dict) else K) for j in octaves}
    for F in Ks.values():
        F.check_alpha(lfsm.alpha)
    cfg = {"alpha": lfsm.alpha, "H": lfsm.H, "wavelet": wavelet.name, "Q": wavelet.Q,
           "octaves": octaves, "K": {str(j): F.to_dict() for j, F in Ks.items()}, "N": int(N),
           "R": int(R), "lag_cap": lag_cap, "ad_level": ad_level, "n_se": n_se,
           "synth_kw": synth_kw or {}}
    rep = McReport("multiscale", config_id, cfg, seed)
    cond = clt_condition(lfsm.alpha, lfsm.H, wavelet.Q)
    if not cond["satisfied"]:
        rep.hypothesis_unmet.append(
            f"Q - H > 1/(alpha(alpha-1)) fails: {cond['lhs']:.4g} <= {cond['rhs']:.4g}")
    draws, synth = synthesize_grids(lfsm, wavelet, octaves, N, R, seed, threads,
                                    **(synth_kw or {}))
    grids = [d[1] for d in draws]
    kv = {j: [Ks[j](g[j]) for g in grids] for j in octaves}
    means = {}
    for j in octaves:
        ex = Ks[j].exact_mean(lfsm.alpha, synth.coef_scale(j))
        means[j] = float(np.mean(np.concatenate(kv[j]))) if ex is None else ex
    Y = np.column_stack([
        np.array([(x.sum() - x.size * means[j]) / np.sqrt(x.size) for x in kv[j]]) for j in octaves
    ])
    J = len(octaves)
    Yc = Y - Y.mean(axis=0)
    emp = Yc.T @ Yc / (Y.shape[0] - 1)
    se = np.empty((J, J))
    for a in range(J):
        for b in range(J):
            se[a, b] = (Yc[:, a] * Yc[:, b]).std(ddof=1) / np.sqrt(Y.shape[0])
    S = int(grids[0].meta.get("support", wavelet.support))
    series = np.empty((J, J))
    for a, j in enumerate(octaves):
        for b, k in enumerate(octaves):
            if b < a:
                continue
            nk = min(x.size for x in kv[k])
            L = int(min(nk // 4, 32)) if lag_cap is None else int(lag_cap)
            lags = _lag_range(j, k, S, L)
            cov = _cross_cov(kv[j], kv[k], 2 ** (k - j), lags, means[j], means[k], False)
            series[a, b] = series[b, a] = 2.0 ** ((j - k) / 2.0) * cov.sum()
    rep.summaries = {"empirical_cov": emp.tolist(), "empirical_se": se.tolist(),
                     "series": series.tolist(), "means": {str(j): m for j, m in means.items()},
                     "clt_condition": cond}
    for a, j in enumerate(octaves):
        a2, p = ad_normality(Y[:, a])
        rep.add_records(Y[:, a], N, f"Y_{j}")
        rep.verdicts.append(Verdict.check(f"normality_j{j}", p > ad_level, p, ad_level, None,
                                          "Anderson-Darling p > level", A2=a2))
    for a, j in enumerate(octaves):
        for b, k in enumerate(octaves):
            if b < a:
                continue
            d = abs(emp[a, b] - series[a, b])
            rep.verdicts.append(Verdict.check(
                f"cov_{j}_{k}", d <= n_se * se[a, b], d / se[a, b], 0.0, n_se,
                "|empirical - series| <= n_se * SE (value in SE units)",
                empirical=emp[a, b], series=series[a, b], se=se[a, b]))
    idx = {j: a for a, j in enumerate(octaves)}
    for j in octaves:
        for k in octaves:
            if k < j or j + 1 not in idx or k + 1 not in idx:
                continue
            a, b, c, e = idx[j], idx[k], idx[j + 1], idx[k + 1]
            d = abs(emp[a, b] - emp[c, e])
            s = float(np.hypot(se[a, b], se[c, e]))
            rep.verdicts.append(Verdict.check(
                f"prefactor_{j}{k}_vs_{j + 1}{k + 1}", d <= n_se * s, d / s, 0.0, n_se,
                "|cov(j,k) - cov(j+1,k+1)| <= n_se * SE (value in SE units)"))
    rep.runtime = time.perf_counter() - t0
    return rep
