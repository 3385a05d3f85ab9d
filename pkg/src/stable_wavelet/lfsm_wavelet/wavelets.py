"""Compactly supported orthonormal wavelets: Haar and Daubechies(Q).

The mother wavelet is materialised on the dyadic grid ``delta = 2**-r``
of its support ``[0, 2Q-1]``.  Haar is stored as exact cell values of a
piecewise-constant function; Daubechies wavelets are stored as node values
obtained by the cascade recursion and interpreted as the piecewise-linear
interpolant.  All integrals against ``psi`` are integrals of that
interpolant, so moments are exact functionals of the stored samples.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ..errors import ParameterError

__all__ = ["WaveletSpec", "build_wavelet", "daubechies_filter", "MAX_Q"]

MAX_Q = 10


@lru_cache(maxsize=None)
def _daubechies_filter_cached(q: int) -> tuple:
    if q == 1:
        return (2 ** -0.5, 2 ** -0.5)
    # |m0|^2 factorisation: P(y) = sum_k C(Q-1+k, k) y^k with y = sin^2(w/2)
    coeffs = [comb(q - 1 + k, k) for k in range(q)]
    y_roots = np.roots(coeffs[::-1])
    # y = (2 - z - 1/z)/4  ->  z^2 - (2 - 4y) z + 1 = 0; keep the root inside the unit disc
    zs = []
    for y in y_roots:
        r = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        zs.append(r[np.argmin(np.abs(r))])
    poly = np.array([1.0 + 0j])
    for z in zs:
        poly = np.convolve(poly, [1.0, -z])
    for _ in range(q):
        poly = np.convolve(poly, [1.0, 1.0])
    h = np.real(poly)
    h = h * (np.sqrt(2.0) / h.sum())
    # conventional orientation: largest taps first
    if abs(h[0]) < abs(h[-1]):
        h = h[::-1]
    return tuple(h)


def daubechies_filter(q: int) -> np.ndarray:
    """Minimum-phase Daubechies low-pass filter with ``q`` vanishing moments.

    Normalised so that the taps sum to ``sqrt(2)``; ``q=1`` is Haar.
    """
    q = int(q)
    if not 1 <= q <= MAX_Q:
        raise ParameterError(f"Daubechies order must be in 1..{MAX_Q}, got {q}")
    return np.array(_daubechies_filter_cached(q))


def _highpass(h: np.ndarray) -> np.ndarray:
    n = np.arange(h.size)
    return (-1.0) ** n * h[::-1]


def _cascade_phi(h: np.ndarray, level: int) -> np.ndarray:
    """Scaling function at ``m 2**-level``, ``m = 0..(L-1) 2**level``."""
    L = h.size
    s = L - 1
    # values at the integers: eigenvector of M[n, m] = sqrt2 h[2n - m] for eigenvalue 1
    M = np.zeros((s + 1, s + 1))
    for n in range(s + 1):
        for m in range(s + 1):
            k = 2 * n - m
            if 0 <= k < L:
                M[n, m] = np.sqrt(2.0) * h[k]
    w, V = np.linalg.eig(M)
    i = np.argmin(np.abs(w - 1.0))
    phi = np.real(V[:, i])
    phi = phi / phi.sum()
    for lev in range(1, level + 1):
        new = np.zeros(s * 2 ** lev + 1)
        half = 2 ** (lev - 1)
        m = np.arange(new.size)
        for k in range(L):
            idx = m - k * half
            ok = (idx >= 0) & (idx < phi.size)
            new[ok] += np.sqrt(2.0) * h[k] * phi[idx[ok]]
        phi = new
    return phi


@dataclass(frozen=True)
class WaveletSpec:
    """Sampled mother wavelet.

    Attributes
    ----------
    family : str
        ``"haar"`` or ``"daubechies"``.
    Q : int
        Number of vanishing moments.
    r : int
        Grid resolution exponent, ``delta = 2**-r``.
    samples : ndarray
        Haar: value on each cell ``[n delta, (n+1) delta)``.  Daubechies:
        node values at ``n delta``, ``n = 0..support*2**r``.
    interp : str
        ``"constant"`` (cell values) or ``"linear"`` (node values).
    lowpass : ndarray
        Scaling filter used by the pyramidal transform.
    """

    family: str
    Q: int
    r: int
    samples: np.ndarray
    interp: str
    lowpass: np.ndarray

    @property
    def delta(self) -> float:
        return 2.0 ** -self.r

    @property
    def support(self) -> int:
        """Length of the support ``[0, 2Q-1]``."""
        return 2 * self.Q - 1

    @property
    def highpass(self) -> np.ndarray:
        return _highpass(self.lowpass)

    @property
    def name(self) -> str:
        return "haar" if self.family == "haar" else f"db{self.Q}"

    def grid(self) -> np.ndarray:
        """Cell left edges (constant) or node positions (linear)."""
        return np.arange(self.samples.size) * self.delta

    def __call__(self, t):
        """Evaluate the interpolant."""
        t = np.asarray(t, dtype=float)
        if self.interp == "constant":
            idx = np.floor(t / self.delta).astype(np.int64)
            ok = (idx >= 0) & (idx < self.samples.size)
            out = np.zeros_like(t)
            out[ok] = self.samples[idx[ok]]
            return out
        return np.interp(t, self.grid(), self.samples, left=0.0, right=0.0)

    def moments(self, m_max: int, about: float = 0.0, absolute: bool = False) -> np.ndarray:
        """``int psi(t) (t - about)**m dt`` for ``m = 0..m_max`` (exact for the interpolant).

        With ``absolute=True`` returns ``int |psi(t)| |t - about|**m dt``.
        """
        deg = m_max + 2
        xg, wg = np.polynomial.legendre.leggauss(max(2, (deg + 2) // 2 + 1))
        d = self.delta
        if self.interp == "constant":
            left = self.grid()
            t = left[:, None] + 0.5 * d * (xg[None, :] + 1.0)
            val = np.repeat(self.samples[:, None], xg.size, axis=1)
        else:
            left = self.grid()[:-1]
            lam = 0.5 * (xg + 1.0)
            t = left[:, None] + d * lam[None, :]
            val = self.samples[:-1, None] * (1.0 - lam) + self.samples[1:, None] * lam
        wt = 0.5 * d * wg[None, :]
        x = t - about
        if absolute:
            val = np.abs(val)
            x = np.abs(x)
            if self.interp == "linear":
                # |psi| is not polynomial on cells with a sign change; refine those cells
                return _abs_moments_fine(self, m_max, about)
        out = np.empty(m_max + 1)
        p = np.ones_like(x)
        for m in range(m_max + 1):
            out[m] = np.sum(wt * val * p)
            p = p * x
        return out

    def check_moments(self, rtol: float = 1e-6) -> dict:
        """Verify vanishing moments ``0..Q-1`` and a nonzero moment ``Q``."""
        mom = self.moments(self.Q)
        ref = self.moments(self.Q, absolute=True)
        rel = np.abs(mom) / ref
        ok = bool(np.all(rel[: self.Q] <= rtol) and rel[self.Q] > rtol)
        return {"moments": mom.tolist(), "relative": rel.tolist(), "ok": ok}


def _abs_moments_fine(w: WaveletSpec, m_max: int, about: float) -> np.ndarray:
    sub = 16
    t = (np.arange(w.samples.size * sub) + 0.5) * (w.delta / sub)
    t = t[t <= w.grid()[-1]]
    v = np.abs(w(t))
    x = np.abs(t - about)
    return np.array([np.sum(v * x ** m) * (w.delta / sub) for m in range(m_max + 1)])


def build_wavelet(family: str = "daubechies", Q: int = 2, r: int = 10) -> WaveletSpec:
    """Materialise a mother wavelet on the grid ``2**-r``.

    Parameters
    ----------
    family : {"haar", "daubechies"}
        ``daubechies`` with ``Q=1`` is the Haar wavelet.
    Q : int
        Vanishing moments, ``1..MAX_Q`` (ignored for Haar, which has Q=1).
    r : int
        Resolution exponent, at least 6.

    Raises
    ------
    ParameterError
        Unknown family, unsupported ``Q`` or ``r < 6``, or a sampled wavelet
        failing its moment check.
    """
    family = str(family).lower()
    if family in ("db", "daub"):
        family = "daubechies"
    if family not in ("haar", "daubechies"):
        raise ParameterError(f"unsupported wavelet family {family!r}")
    r = int(r)
    if r < 6:
        raise ParameterError(f"resolution r must be >= 6, got {r}")
    if family == "haar" or int(Q) == 1:
        n = 2 ** r
        s = np.ones(n)
        s[n // 2:] = -1.0
        spec = WaveletSpec("haar", 1, r, s, "constant", daubechies_filter(1))
    else:
        Q = int(Q)
        h = daubechies_filter(Q)
        g = _highpass(h)
        phi = _cascade_phi(h, r - 1)
        m = np.arange((h.size - 1) * 2 ** r + 1)
        half = 2 ** (r - 1)
        psi = np.zeros(m.size)
        for k in range(g.size):
            idx = m - k * half
            ok = (idx >= 0) & (idx < phi.size)
            psi[ok] += np.sqrt(2.0) * g[k] * phi[idx[ok]]
        spec = WaveletSpec("daubechies", Q, r, psi, "linear", h)
    for arr in (spec.samples, spec.lowpass):
        arr.setflags(write=False)
    chk = spec.check_moments()
    if not chk["ok"]:
        raise ParameterError(f"sampled wavelet fails its moment check: {chk['relative']}")
    return spec
