"""LFSM parameters and the wavelet kernel ``h(u) = int (s+u)_+^kappa psi(s) ds``.

Three evaluation routes are provided:

* ``closed_form`` (Haar only);
* ``quadrature``: exact integration of the sampled wavelet's interpolant
  against ``(s+u)_+^kappa``, cell by cell;
* ``expansion``: the binomial series ``sum_m C(kappa, m) mu_m (u+c)^(kappa-m)``
  in the moments ``mu_m`` of psi about its centre ``c``, valid for ``u``
  well to the right of the support.  The first ``Q`` terms vanish, which is
  where the ``u^(kappa-Q)`` decay comes from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal, special

from ..errors import DiagnosticsError, ParameterError
from .wavelets import WaveletSpec

__all__ = ["LfsmSpec", "HKernel", "get_kernel", "h_kernel", "h_decay_fit", "clt_condition"]

_SERIES_SWITCH = 32.0  # in cell widths; beyond it the cell weights use a Taylor series
_SERIES_TERMS = 6


@dataclass(frozen=True)
class LfsmSpec:
    """Linear fractional stable motion with stability ``alpha`` and self-similarity ``H``."""

    alpha: float
    H: float

    def __post_init__(self):
        a, h = float(self.alpha), float(self.H)
        if not (np.isfinite(a) and 1.0 < a < 2.0):
            raise ParameterError(f"alpha must lie in (1, 2), got {self.alpha!r}")
        if not (np.isfinite(h) and 0.0 < h < 1.0):
            raise ParameterError(f"H (hurst) must lie in the open interval (0, 1), got {self.H!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "H", h)

    @property
    def kappa(self) -> float:
        return self.H - 1.0 / self.alpha


def clt_condition(alpha: float, H: float, Q: int) -> dict:
    """Sufficient condition ``Q - H > 1/(alpha(alpha-1))`` for asymptotic
    normality of the wavelet estimator.

    Returns a dict with ``satisfied``, ``lhs`` and ``rhs``.
    """
    lhs = Q - H
    rhs = 1.0 / (alpha * (alpha - 1.0))
    return {"satisfied": bool(lhs > rhs), "lhs": float(lhs), "rhs": float(rhs)}


def _series_coeffs(kappa: float, width: float, hat: bool) -> np.ndarray:
    m = np.arange(_SERIES_TERMS)
    b = special.binom(kappa, 2 * m)
    if hat:
        return b * 2.0 * width ** (2 * m + 1) / ((2 * m + 1) * (2 * m + 2))
    half = 0.5 * width
    return b * 2.0 * half ** (2 * m + 1) / (2 * m + 1)


def _pos_pow(z, p):
    return np.where(z > 0, np.abs(z) ** p, 0.0)


def hat_weight(y, width: float, kappa: float) -> np.ndarray:
    """``int (1 - |t|/width)_+ (y + t)_+^kappa dt``."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    near = (y > -width) & (y < _SERIES_SWITCH * width)
    if np.any(near):
        yn = y[near]
        c = 1.0 / ((kappa + 1.0) * (kappa + 2.0) * width)
        e = kappa + 2.0
        out[near] = c * (_pos_pow(yn + width, e) - 2.0 * _pos_pow(yn, e) + _pos_pow(yn - width, e))
    far = y >= _SERIES_SWITCH * width
    if np.any(far):
        yf = y[far]
        cf = _series_coeffs(kappa, width, True)
        acc = np.zeros_like(yf)
        inv2 = yf ** -2.0
        p = yf ** kappa
        for c in cf:
            acc += c * p
            p = p * inv2
        out[far] = acc
    return out


def box_weight(y, width: float, kappa: float) -> np.ndarray:
    """``int_{-width/2}^{width/2} (y + t)_+^kappa dt``."""
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    half = 0.5 * width
    near = (y > -half) & (y < _SERIES_SWITCH * width)
    if np.any(near):
        yn = y[near]
        e = kappa + 1.0
        out[near] = (_pos_pow(yn + half, e) - _pos_pow(yn - half, e)) / e
    far = y >= _SERIES_SWITCH * width
    if np.any(far):
        yf = y[far]
        cf = _series_coeffs(kappa, width, False)
        acc = np.zeros_like(yf)
        inv2 = yf ** -2.0
        p = yf ** kappa
        for c in cf:
            acc += c * p
            p = p * inv2
        out[far] = acc
    return out


class HKernel:
    """Evaluator of ``h`` for one (LFSM, wavelet) pair.

    Parameters
    ----------
    lfsm : LfsmSpec or float
        The LFSM, or directly the exponent ``kappa > -1``.
    wavelet : WaveletSpec
    x_far : float, optional
        Points beyond ``x_far`` use the moment expansion; default
        ``max(64, 16 * support)``.
    """

    def __init__(self, lfsm, wavelet: WaveletSpec, x_far: float | None = None):
        kappa = lfsm.kappa if isinstance(lfsm, LfsmSpec) else float(lfsm)
        if not kappa > -1.0:
            raise ParameterError(f"kappa must exceed -1, got {kappa}")
        self.kappa = kappa
        self.wavelet = wavelet
        self.support = float(wavelet.support)
        self.x_far = float(x_far) if x_far is not None else max(64.0, 16.0 * self.support)
        self.centre = 0.5 * self.support
        ratio = (0.5 * self.support) / (self.x_far + self.centre)
        n_terms = int(math.ceil(40.0 / -math.log(ratio))) + wavelet.Q + 2
        self.n_terms = n_terms
        mom = wavelet.moments(n_terms, about=self.centre)
        mom[: wavelet.Q] = 0.0  # vanish exactly for the interpolant; drop roundoff
        self.series = special.binom(kappa, np.arange(n_terms + 1)) * mom
        m0 = wavelet.moments(wavelet.Q)
        # leading coefficient of h(x) ~ c_Q x^(kappa - Q)
        self.leading = float(special.binom(kappa, wavelet.Q) * m0[wavelet.Q])
        self.abs_mass = float(wavelet.moments(0, absolute=True)[0])
        self._tables = {}

    # -- evaluation routes -------------------------------------------------
    def closed_form(self, u):
        if self.wavelet.family != "haar":
            raise ParameterError("the closed form exists for the Haar wavelet only")
        u = np.asarray(u, dtype=float)
        e = self.kappa + 1.0
        return (2.0 * _pos_pow(u + 0.5, e) - _pos_pow(u, e) - _pos_pow(u + 1.0, e)) / e

    def quadrature(self, u, chunk: int = 1 << 22) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        w = self.wavelet
        d = w.delta
        pos = w.grid()
        vals = w.samples
        if w.interp == "constant":
            pos = pos + 0.5 * d
            weight = box_weight
        else:
            weight = hat_weight
        out = np.empty(u.size)
        rows = max(1, chunk // pos.size)
        for s in range(0, u.size, rows):
            uu = u[s:s + rows]
            out[s:s + rows] = weight(uu[:, None] + pos[None, :], d, self.kappa) @ vals
        out[u < -self.support] = 0.0
        return out

    def expansion(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        x = u + self.centre
        if np.any(x <= 0.5 * self.support):
            raise ParameterError("expansion needs u to the right of the wavelet support")
        acc = np.zeros_like(x)
        inv = 1.0 / x
        p = x ** self.kappa
        for m, c in enumerate(self.series):
            if m >= self.wavelet.Q:
                acc += c * p
            p = p * inv
        return acc

    def __call__(self, u, method: str = "auto"):
        u = np.asarray(u, dtype=float)
        if method == "closed_form":
            return self.closed_form(u)
        if method == "quadrature":
            return self.quadrature(u).reshape(u.shape)
        if method == "expansion":
            return self.expansion(u)
        if method != "auto":
            raise ParameterError(f"unknown method {method!r}")
        flat = np.atleast_1d(u).ravel()
        out = np.zeros(flat.size)
        far = flat > self.x_far
        near = (~far) & (flat >= -self.support)
        if np.any(far):
            out[far] = self.expansion(flat[far])
        if np.any(near):
            if self.wavelet.family == "haar":
                out[near] = self.closed_form(flat[near])
            else:
                out[near] = self.quadrature(flat[near])
        return out.reshape(u.shape) if u.ndim else float(out[0])

    # -- tables ------------------------------------------------------------
    def table(self, step: float):
        """``h`` at ``x = m * step`` for ``-support <= x <= x_far``.

        ``step`` must be a power of two.  Returns ``(m_lo, values)``; the
        computation is an FFT correlation of the cell weights with psi.
        """
        key = float(step)
        if key in self._tables:
            return self._tables[key]
        w = self.wavelet
        d = w.delta
        e = math.log2(step)
        if abs(e - round(e)) > 1e-12:
            raise ParameterError("table step must be a power of two")
        s = min(step, d)
        R = int(round(d / s))
        m_lo = int(round(-self.support / s))
        m_hi = int(math.floor(self.x_far / s + 1e-9))
        n_nodes = w.samples.size
        psi_up = np.zeros((n_nodes - 1) * R + 1)
        psi_up[::R] = w.samples
        l = np.arange(m_lo, m_hi + (n_nodes - 1) * R + 1)
        if w.interp == "constant":
            wv = box_weight(l * s + 0.5 * d, d, self.kappa)
        else:
            wv = hat_weight(l * s, d, self.kappa)
        vals = signal.correlate(wv, psi_up, mode="valid", method="fft")
        if step > s:
            sub = int(round(step / s))
            first = (-m_lo) % sub
            vals = vals[first::sub]
            m_lo = (m_lo + first) // sub
        res = (m_lo, vals)
        self._tables[key] = res
        return res

    def on_grid(self, x, step: float) -> np.ndarray:
        """Evaluate at points that are multiples of ``step`` (table + expansion)."""
        x = np.asarray(x, dtype=float)
        m_lo, vals = self.table(step)
        out = np.zeros_like(x)
        far = x > self.x_far
        if np.any(far):
            out[far] = self.expansion(x[far])
        near = (~far) & (x >= -self.support)
        idx = np.rint(x[near] / step).astype(np.int64) - m_lo
        ok = (idx >= 0) & (idx < vals.size)
        tmp = np.zeros(idx.size)
        tmp[ok] = vals[idx[ok]]
        out[near] = tmp
        return out

    def alpha_mass(self, alpha: float) -> float:
        """Approximate ``int |h|^alpha`` (table on the near range plus the power tail)."""
        step = self.wavelet.delta
        m_lo, vals = self.table(step)
        near = float(np.sum(np.abs(vals) ** alpha) * step)
        e = (self.kappa - self.wavelet.Q) * alpha
        tail = abs(self.leading) ** alpha * self.x_far ** (e + 1.0) / (-(e + 1.0))
        return near + tail

    def tail_horizon(self, alpha: float, tol: float) -> float:
        """``X`` with ``int_X^inf |h|^alpha < tol * int |h|^alpha`` from the leading decay."""
        e = (self.kappa - self.wavelet.Q) * alpha + 1.0
        if e >= 0:
            raise ParameterError("h is not alpha-integrable for these parameters")
        total = self.alpha_mass(alpha)
        c = abs(self.leading) ** alpha / (-e)
        if c == 0.0:
            return self.x_far
        return max(self.x_far, (tol * total / c) ** (1.0 / e))


_KERNELS: dict = {}


def get_kernel(lfsm, wavelet: WaveletSpec) -> HKernel:
    """Cached ``HKernel``; a wavelet is determined by ``(family, Q, r)``."""
    kappa = lfsm.kappa if isinstance(lfsm, LfsmSpec) else float(lfsm)
    key = (kappa, wavelet.family, wavelet.Q, wavelet.r)
    hk = _KERNELS.get(key)
    if hk is None:
        if len(_KERNELS) >= 32:
            _KERNELS.pop(next(iter(_KERNELS)))
        hk = _KERNELS[key] = HKernel(kappa, wavelet)
    return hk


def h_kernel(lfsm, w: WaveletSpec, u, method: str = "auto"):
    """``h(u) = int (s+u)_+^kappa psi(s) ds``.

    Parameters
    ----------
    lfsm : LfsmSpec or float
        LFSM or the exponent ``kappa``.
    w : WaveletSpec
    u : float or array
    method : {"auto", "closed_form", "quadrature", "expansion"}
        ``auto`` uses the Haar closed form or the quadrature on the near range
        and the moment expansion far to the right.
    """
    hk = get_kernel(lfsm, w)
    out = hk(u, method)
    return float(out) if np.ndim(out) == 0 else out


def h_decay_fit(lfsm, w: WaveletSpec, u_range=(10.0, 1e3), n_points: int = 40,
                method: str = "auto") -> dict:
    """Least-squares slope of ``log|h(u)|`` against ``log u``.

    Points where ``h`` is zero up to rounding are dropped.  Returns a dict
    with ``slope``, ``intercept``, ``expected`` (``kappa - Q``), ``u`` and
    ``h`` of the points used.

    Raises
    ------
    DiagnosticsError
        If fewer than 8 usable points remain.
    """
    lo, hi = float(u_range[0]), float(u_range[1])
    if not (10.0 <= lo < hi <= 1e4):
        raise ParameterError("u_range must lie within [10, 1e4]")
    hk = get_kernel(lfsm, w)
    u = np.geomspace(lo, hi, int(n_points))
    if method == "auto" and w.family == "haar":
        method = "closed_form"
    h = np.asarray(hk(u, method), dtype=float)
    if method == "closed_form":
        scale = (u + 1.0) ** (hk.kappa + 1.0) / (hk.kappa + 1.0)
    else:
        scale = hk.abs_mass * (u + hk.support) ** hk.kappa
    keep = np.abs(h) > 1e-12 * scale
    if keep.sum() < 8:
        raise DiagnosticsError(
            f"only {int(keep.sum())} points with h != 0 in {u_range}; the decay cannot be fitted"
        )
    slope, intercept = np.polyfit(np.log(u[keep]), np.log(np.abs(h[keep])), 1)
    return {
        "slope": float(slope),
        "intercept": float(intercept),
        "expected": hk.kappa - w.Q,
        "u": u[keep],
        "h": h[keep],
    }
