"""Wavelet-based estimators of the self-similarity parameter.

``H_hat = sum_j w_j Y_j - 1/2`` with ``Y_j`` the mean of ``log2|d_{j,k}|``
(log estimator) or ``(1/beta) log2`` of the mean of ``|d_{j,k}|**beta``
(power estimator).  The weights satisfy ``sum w_j = 0`` and
``sum j w_j = 1`` so that a log-linear scale diagram ``Y_j = (H+1/2) j + c``
returns ``H`` exactly.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, DiagnosticsError, ParameterError, ShapeError
from .lfsm_wavelet.kernel import clt_condition
from .lfsm_wavelet.synthesis import WaveletCoefGrid

__all__ = [
    "RegressionWeights",
    "EstimateResult",
    "ols_weights",
    "estimate_H_log",
    "estimate_H_power",
    "sigma_jk_plugin",
    "sigma_matrix",
    "sigma2_total",
    "abs_moment",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class RegressionWeights:
    """Slope weights over consecutive octaves ``j_min..j_max``."""

    octaves: tuple
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        oct_ = tuple(int(j) for j in self.octaves)
        if w.shape != (len(oct_),):
            raise ShapeError("one weight per octave is required")
        j = np.asarray(oct_, dtype=float)
        if abs(w.sum()) > 1e-12 or abs(j @ w - 1.0) > 1e-12:
            raise ParameterError("weights must satisfy sum w = 0 and sum j w = 1")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "octaves", oct_)

    def as_dict(self) -> dict:
        return dict(zip(self.octaves, self.w.tolist()))


def ols_weights(j_range, variance_hints: Optional[Sequence[float]] = None) -> RegressionWeights:
    """Least-squares slope weights.

    Parameters
    ----------
    j_range : sequence of int
        Octaves, at least two, e.g. ``range(1, 6)``.
    variance_hints : sequence of float, optional
        Per-octave variances of ``Y_j``; if given, weighted least squares
        with weights ``1/variance``.
    """
    js = [int(j) for j in j_range]
    if len(js) < 2 or len(set(js)) != len(js):
        raise ParameterError("at least two distinct octaves are needed")
    j = np.asarray(js, dtype=float)
    if variance_hints is None:
        lam = np.ones_like(j)
    else:
        v = np.asarray(variance_hints, dtype=float)
        if v.shape != j.shape or np.any(~np.isfinite(v)) or np.any(v <= 0):
            raise ParameterError("variance_hints must be positive, one per octave")
        lam = 1.0 / v
    jbar = lam @ j / lam.sum()
    c = j - jbar
    w = lam * c / (lam @ (c * c))
    # polish the two constraints against rounding
    w = w - lam * (w.sum() / lam.sum())
    w = w / (j @ w)
    return RegressionWeights(tuple(js), w)


@dataclass
class EstimateResult:
    method: str
    H_hat: float
    Y: list
    N: list
    w: list
    octaves: list
    beta: Optional[float] = None
    sigma2_hat: Optional[float] = None
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "H_hat": self.H_hat,
            "Y": self.Y,
            "N": self.N,
            "w": self.w,
            "octaves": self.octaves,
            "warnings": self.warnings,
        }
        if self.beta is not None:
            d["beta"] = self.beta
        if self.sigma2_hat is not None:
            d["sigma2_hat"] = self.sigma2_hat
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _aligned(grid: WaveletCoefGrid, w: RegressionWeights):
    missing = [j for j in w.octaves if j not in grid.coeffs]
    if missing:
        raise ShapeError(f"grid lacks octaves {missing} required by the weights")
    arrs = [grid[j] for j in w.octaves]
    for j, a in zip(w.octaves, arrs):
        if a.size < 1:
            raise DataError(f"octave {j} has no coefficients")
        if not np.all(np.isfinite(a)):
            raise DataError(f"octave {j} contains non-finite coefficients")
    return arrs


def _condition_warnings(grid: WaveletCoefGrid, H_hat: float, alpha: Optional[float]) -> list:
    meta = grid.meta or {}
    a = alpha if alpha is not None else meta.get("alpha")
    Q = meta.get("Q")
    if a is None or Q is None or not (1.0 < float(a) < 2.0):
        return []
    H = meta.get("H", H_hat)
    chk = clt_condition(float(a), float(H), int(Q))
    if chk["satisfied"]:
        return []
    return [
        f"asymptotic normality condition Q - H > 1/(alpha(alpha-1)) fails: "
        f"{chk['lhs']:.6g} <= {chk['rhs']:.6g}"
    ]


def _log2abs(arr: np.ndarray, j: int) -> np.ndarray:
    if np.any(arr == 0):
        raise DataError(f"octave {j} contains an exact zero coefficient; log2|d| is undefined")
    return np.log2(np.abs(arr))


def estimate_H_log(grid: WaveletCoefGrid, w: RegressionWeights, alpha: Optional[float] = None) -> EstimateResult:
    """Log estimator: ``sum_j w_j mean_k log2|d_{j,k}| - 1/2``."""
    arrs = _aligned(grid, w)
    Y = np.array([np.mean(_log2abs(a, j)) for j, a in zip(w.octaves, arrs)])
    H = float(w.w @ Y - 0.5)
    return EstimateResult(
        method="log",
        H_hat=H,
        Y=Y.tolist(),
        N=[int(a.size) for a in arrs],
        w=w.w.tolist(),
        octaves=list(w.octaves),
        warnings=_condition_warnings(grid, H, alpha),
    )


def _check_beta(beta: float, alpha: Optional[float]):
    if alpha is None:
        raise ParameterError("the power estimator needs alpha (argument or grid metadata)")
    beta, alpha = float(beta), float(alpha)
    if not (-1.0 < beta < alpha / 2.0) or beta == 0.0:
        raise ParameterError(f"beta must satisfy -1 < beta < alpha/2 = {alpha / 2:g} and beta != 0, got {beta:g}")
    return beta, alpha


def estimate_H_power(grid: WaveletCoefGrid, w: RegressionWeights, beta: float,
                     alpha: Optional[float] = None) -> EstimateResult:
    """Power estimator: ``(1/beta) sum_j w_j log2 mean_k |d_{j,k}|^beta - 1/2``."""
    if alpha is None:
        alpha = (grid.meta or {}).get("alpha")
    beta, alpha = _check_beta(beta, alpha)
    arrs = _aligned(grid, w)
    Y = []
    for j, a in zip(w.octaves, arrs):
        if beta < 0 and np.any(a == 0):
            raise DataError(f"octave {j} contains an exact zero coefficient")
        m = np.mean(np.abs(a) ** beta)
        if not m > 0:
            raise DataError(f"octave {j} has a vanishing power mean")
        Y.append(math.log2(m) / beta)
    Y = np.array(Y)
    H = float(w.w @ Y - 0.5)
    return EstimateResult(
        method="power",
        beta=beta,
        H_hat=H,
        Y=Y.tolist(),
        N=[int(a.size) for a in arrs],
        w=w.w.tolist(),
        octaves=list(w.octaves),
        warnings=_condition_warnings(grid, H, alpha),
    )


def abs_moment(beta: float, alpha: float, scale: float = 1.0) -> float:
    """``E|X|^beta`` for ``X`` SaS(alpha, scale), ``-1 < beta < alpha``."""
    from scipy.special import gamma

    return float(
        scale ** beta * 2.0 ** beta * gamma((1.0 + beta) / 2.0) * gamma(1.0 - beta / alpha)
        / (gamma(1.0 - beta / 2.0) * math.sqrt(math.pi))
    )


# ---------------------------------------------------------------------------
# asymptotic variance


def _transform(grids: list, j: int, method: str, beta: Optional[float]):
    out = []
    for g in grids:
        a = g[j]
        if method == "log":
            out.append(_log2abs(a, j))
        elif method == "power":
            out.append(np.abs(a) ** beta)
        else:
            raise ParameterError(f"unknown method {method!r}")
    return out


def _lag_range(j: int, k: int, support: int, L: int):
    if k == j:
        return np.arange(-L, L + 1)
    return np.arange(-L, 2 ** (k - j) * support + L + 1)


def _cross_cov(xs: list, ys: list, ratio: int, lags: np.ndarray, mx: float, my: float,
               within: bool) -> np.ndarray:
    """Pooled ``Cov(x_{n + ratio m}, y_m)`` for each lag ``n``.

    ``within=False`` centres with the pooled means over all replicates;
    ``within=True`` centres each path with its own means.
    """
    num = np.zeros(lags.size)
    cnt = np.zeros(lags.size)
    if len({x.size for x in xs}) == 1 and len({y.size for y in ys}) == 1:
        X = np.stack(xs)
        Yc = np.stack(ys)
        X = X - (X.mean(axis=1, keepdims=True) if within else mx)
        Yc = Yc - (Yc.mean(axis=1, keepdims=True) if within else my)
        m = np.arange(Yc.shape[1])
        for i, n in enumerate(lags):
            idx = n + ratio * m
            ok = (idx >= 0) & (idx < X.shape[1])
            if np.any(ok):
                num[i] = np.sum(X[:, idx[ok]] * Yc[:, ok])
                cnt[i] = ok.sum() * X.shape[0]
    else:
        for x, y in zip(xs, ys):
            cx = x - (x.mean() if within else mx)
            cy = y - (y.mean() if within else my)
            m = np.arange(cy.size)
            for i, n in enumerate(lags):
                idx = n + ratio * m
                ok = (idx >= 0) & (idx < cx.size)
                if np.any(ok):
                    num[i] += cx[idx[ok]] @ cy[ok]
                    cnt[i] += ok.sum()
    if np.any(cnt == 0):
        raise DiagnosticsError("not enough coefficients for the requested lags")
    return num / cnt


def _as_grid_list(grids) -> list:
    if isinstance(grids, WaveletCoefGrid):
        return [grids]
    grids = list(grids)
    if not grids:
        raise ParameterError("no grids given")
    return grids


def sigma_jk_plugin(grids, j: int, k: int, lag_cap: Optional[int] = None, method: str = "log",
                    beta: Optional[float] = None, alpha: Optional[float] = None,
                    return_diagnostics: bool = False):
    """Plug-in estimate of ``sigma_{jk}``.

    ``sigma_{jk} = 2^{(j-k)/2} sum_n Cov(T(d_{j,n}), T(d_{k,0}))`` for
    ``k >= j`` (symmetric otherwise), with ``T = log2|.|``.  For
    ``method="power"`` ``T = |.|^beta`` and the sum is divided by
    ``(ln 2)^2 E|d_j|^beta E|d_k|^beta``.

    Parameters
    ----------
    grids : WaveletCoefGrid or list of them
        Independent replicates; covariances are pooled across replicates
        around the pooled means.  A single grid falls back to within-path
        autocovariances (flagged as biased for short records).
    lag_cap : int, optional
        Truncation ``L`` of the lag sum; default ``min(N_k/4, 32)``.
    return_diagnostics : bool
        Also return partial sums against the lag cap.
    """
    grids = _as_grid_list(grids)
    j, k = int(j), int(k)
    if k < j:
        j, k = k, j
    if method == "power":
        if alpha is None:
            alpha = (grids[0].meta or {}).get("alpha")
        beta, alpha = _check_beta(beta, alpha)
    S = int((grids[0].meta or {}).get("support", 1))
    nk = min(g[k].size for g in grids)
    L = int(min(nk // 4, 32)) if lag_cap is None else int(lag_cap)
    if L < 1:
        raise DiagnosticsError("lag cap must be >= 1; the octave is too short")
    xs = _transform(grids, j, method, beta)
    ys = _transform(grids, k, method, beta)
    within = len(grids) == 1
    mx = float(np.mean(np.concatenate(xs)))
    my = float(np.mean(np.concatenate(ys)))
    lags = _lag_range(j, k, S, L)
    cov = _cross_cov(xs, ys, 2 ** (k - j), lags, mx, my, within)
    norm = 2.0 ** ((j - k) / 2.0)
    if method == "power":
        norm /= LN2 ** 2 * mx * my
    value = float(norm * cov.sum())
    if not return_diagnostics:
        return value
    # partial sums for lag caps 1..L (lags inside the overlap window always kept)
    core_hi = 0 if k == j else 2 ** (k - j) * S
    partial = []
    for ell in range(1, L + 1):
        keep = (lags >= -ell) & (lags <= core_hi + ell)
        partial.append(float(norm * cov[keep].sum()))
    diag = {
        "lags": lags.tolist(),
        "covariances": cov.tolist(),
        "partial_sums": partial,
        "lag_cap": L,
        "route": "within-path (biased for short N)" if within else "across-replicate",
    }
    return value, diag


def sigma_matrix(grids, octaves: Sequence[int], lag_cap: Optional[int] = None, method: str = "log",
                 beta: Optional[float] = None, alpha: Optional[float] = None):
    """Symmetric matrix ``sigma_{jk}`` over ``octaves`` and per-entry diagnostics."""
    octaves = [int(j) for j in octaves]
    n = len(octaves)
    S = np.zeros((n, n))
    diags = {}
    for a in range(n):
        for b in range(a, n):
            v, d = sigma_jk_plugin(grids, octaves[a], octaves[b], lag_cap, method, beta, alpha,
                                   return_diagnostics=True)
            S[a, b] = S[b, a] = v
            diags[(octaves[a], octaves[b])] = d
    return S, diags


def sigma2_total(sigma, w: RegressionWeights, noise_floor: float = 0.0) -> float:
    """``sum_{j,k} w_j w_k 2^{j/2} 2^{k/2} sigma_{jk}``.

    A value below ``-noise_floor`` emits a ``RuntimeWarning`` (lag sums too
    short) and is returned as is.
    """
    S = np.asarray(sigma, dtype=float)
    n = len(w.octaves)
    if S.shape != (n, n):
        raise ShapeError(f"sigma must be {n}x{n} to match the weights")
    if not np.allclose(S, S.T, rtol=1e-12, atol=0):
        raise ShapeError("sigma must be symmetric")
    v = w.w * 2.0 ** (np.asarray(w.octaves, dtype=float) / 2.0)
    val = float(v @ S @ v)
    if val < -noise_floor:
        warnings.warn("negative plug-in variance: the lag truncation is probably too short",
                      RuntimeWarning, stacklevel=2)
    return val
