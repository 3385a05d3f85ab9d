"""Synthesis of LFSM paths and of their wavelet coefficients.

Both are stable integrals against one SaS random measure ``M``, discretised
on three zones of the time axis (left of ``0`` is the past):

* fine zone ``[-T_near, N]``: cells of width ``delta``; every output is an
  FFT convolution of the shared atom vector with a sampled kernel;
* middle zone ``[-T_mid, -T_near]``: unit cells, also by FFT;
* far zone ``[-T_far, -T_mid]``: geometrically growing cells; here the
  kernels are smooth in the output index, and a truncated binomial series
  in ``k / |u|`` turns the contribution into a small matrix product.

A coefficient ``d_{j,k}`` uses the kernel ``2^{j(kappa+1/2)} h(k - 2^-j u)``
and the path uses ``(t-u)_+^kappa - (-u)_+^kappa``.  All outputs of one
replicate come from the same atoms, so the path and all octaves are
coupled exactly as in the continuous model.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import fft as sfft
from scipy import special

from ..errors import ConfigurationError, ParameterError, ShapeError
from ..stable_core import RngStream, _sas_from_generator
from .kernel import HKernel, LfsmSpec, get_kernel
from .wavelets import WaveletSpec

__all__ = [
    "SynthesisConfig",
    "WaveletCoefGrid",
    "LfsmSynthesizer",
    "coef_count",
    "synth_lfsm_path",
    "wavelet_coeffs_direct",
    "wavelet_coeffs_pyramidal",
    "scale_kernel_pair",
]


def coef_count(N: int, j: int, support: int) -> int:
    """Number of coefficients at octave ``j`` whose support lies in ``[0, N]``."""
    return int(N // 2 ** j) - int(support)


@dataclass(frozen=True)
class SynthesisConfig:
    """Discretisation and randomness of one synthesis.

    Parameters
    ----------
    N : int
        Path length; the path is sampled at ``t = 0..N``.
    j_min, j_max : int
        Octave range for coefficient synthesis.
    delta : float, optional
        Cell width of the fine zone, a power of two not exceeding
        ``2**-j_max``.  Default ``2**-max(j_max, 5 - j_min)``.
    horizon : float, optional
        Left truncation ``T`` of the random measure.  Default: smallest
        value whose neglected kernel alpha-mass is below ``tail_tol``.
    tail_tol : float
        Relative alpha-mass tolerance for the truncated kernel tails.
    far_growth : float
        Relative width of the geometric far-zone cells.
    seed, stream_id : int
        Random stream of the synthesis.
    """

    N: int
    j_min: int = 1
    j_max: int = 5
    delta: Optional[float] = None
    horizon: Optional[float] = None
    tail_tol: float = 1e-6
    far_growth: float = 0.02
    seed: int = 0
    stream_id: int = 0
    max_far_cells: int = 100_000

    def __post_init__(self):
        if int(self.N) < 1:
            raise ConfigurationError("N must be >= 1")
        object.__setattr__(self, "N", int(self.N))
        if not (0 <= int(self.j_min) <= int(self.j_max)):
            raise ConfigurationError("octaves must satisfy 0 <= j_min <= j_max")
        object.__setattr__(self, "j_min", int(self.j_min))
        object.__setattr__(self, "j_max", int(self.j_max))
        d = self.delta
        if d is None:
            d = 2.0 ** -max(self.j_max, 5 - self.j_min)
        e = math.log2(d) if d > 0 else float("nan")
        if not (d > 0 and abs(e - round(e)) < 1e-12 and e <= 0):
            raise ConfigurationError(f"delta must be a power of two <= 1, got {self.delta!r}")
        if d > 2.0 ** -self.j_max:
            raise ConfigurationError(f"delta must not exceed 2**-j_max = {2.0 ** -self.j_max}")
        object.__setattr__(self, "delta", float(d))
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigurationError("horizon must be positive")
        if not (0 < self.tail_tol < 1):
            raise ConfigurationError("tail_tol must lie in (0, 1)")
        if not (0 < self.far_growth <= 0.5):
            raise ConfigurationError("far_growth must lie in (0, 0.5]")

    @property
    def stream(self) -> RngStream:
        return RngStream(self.seed, self.stream_id)

    @property
    def octaves(self) -> list:
        return list(range(self.j_min, self.j_max + 1))


@dataclass
class WaveletCoefGrid:
    """Wavelet coefficients ``d[j][k]`` per octave plus metadata."""

    coeffs: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {int(j): np.asarray(v, dtype=float) for j, v in sorted(self.coeffs.items())}

    @property
    def octaves(self) -> list:
        return list(self.coeffs)

    @property
    def counts(self) -> dict:
        return {j: int(v.size) for j, v in self.coeffs.items()}

    def __getitem__(self, j: int) -> np.ndarray:
        return self.coeffs[int(j)]

    def prefix(self, N: int) -> "WaveletCoefGrid":
        """Coefficients of the first ``N`` samples only."""
        s = int(self.meta.get("support", 1))
        out = {}
        for j, v in self.coeffs.items():
            n = coef_count(N, j, s)
            if n < 1:
                raise ConfigurationError(f"N={N} leaves no coefficient at octave {j}")
            out[j] = v[:n]
        meta = dict(self.meta, N=int(N), N_j={str(j): int(v.size) for j, v in out.items()})
        return WaveletCoefGrid(out, meta)

    def select(self, octaves: Iterable[int]) -> "WaveletCoefGrid":
        octaves = [int(j) for j in octaves]
        missing = [j for j in octaves if j not in self.coeffs]
        if missing:
            raise ShapeError(f"octaves {missing} not present in the grid")
        return WaveletCoefGrid({j: self.coeffs[j] for j in octaves}, dict(self.meta))


@dataclass
class _Zone:
    """Uniform atoms ``u_i = u0 + (i + 1/2) step``, ``i < n``."""

    u0: float
    step: float
    n: int
    nfft: int = 0


@dataclass
class _ConvOutput:
    spectrum: np.ndarray
    positions: np.ndarray  # indices into the circular convolution


class LfsmSynthesizer:
    """Precomputed discretisation for repeated draws of one configuration.

    Parameters
    ----------
    lfsm : LfsmSpec
    cfg : SynthesisConfig
    wavelet : WaveletSpec, optional
        Needed for coefficients.
    path : bool
        Whether to synthesise the path ``X(0..N)``.
    coeffs : bool
        Whether to synthesise the coefficients of octaves ``j_min..j_max``.
    """

    def __init__(self, lfsm: LfsmSpec, cfg: SynthesisConfig, wavelet: WaveletSpec | None = None,
                 path: bool = True, coeffs: bool = True):
        if coeffs and wavelet is None:
            raise ConfigurationError("coefficient synthesis needs a wavelet")
        self.lfsm = lfsm
        self.cfg = cfg
        self.wavelet = wavelet
        self.want_path = bool(path)
        self.want_coeffs = bool(coeffs)
        self.kappa = lfsm.kappa
        self.alpha = lfsm.alpha
        a = self.alpha
        N = cfg.N
        self.support = wavelet.support if wavelet is not None else 1
        if self.want_coeffs:
            self.hk: HKernel | None = get_kernel(lfsm, wavelet)
            x_far = self.hk.x_far
            for j in cfg.octaves:
                if coef_count(N, j, self.support) < 1:
                    raise ConfigurationError(
                        f"N={N} is too short for octave {j} (support {self.support})"
                    )
        else:
            self.hk = None
            x_far = 64.0
        self.t_near = float(math.ceil(x_far) * 2 ** cfg.j_max)
        t_mid = float(4 * (N + int(self.t_near)))
        t_far = self._required_horizon(t_mid) if cfg.horizon is None else float(cfg.horizon)
        if cfg.horizon is not None:
            self._check_horizon(t_far)
        t_mid = min(t_mid, max(t_far, self.t_near))
        self.t_mid = float(math.floor(t_mid))
        self.t_far = max(t_far, self.t_mid)

        d = cfg.delta
        self.fine = _Zone(-self.t_near, d, int(round((N + self.t_near) / d)))
        self.mid = _Zone(-self.t_mid, 1.0, int(round(self.t_mid - self.t_near)))
        edges = [self.t_mid]
        while edges[-1] < self.t_far:
            edges.append(min(self.t_far, edges[-1] * (1.0 + cfg.far_growth)))
            if len(edges) > cfg.max_far_cells + 1:
                raise ConfigurationError(
                    f"tail tolerance {cfg.tail_tol} needs more than {cfg.max_far_cells} far cells"
                )
        e = np.array(edges)
        self.far_centres = 0.5 * (e[:-1] + e[1:])
        self.far_widths = np.diff(e)
        self.n_far = self.far_centres.size
        self.q_terms = 48

        self._build_fine()
        self._build_mid()
        self._build_far()

    # ------------------------------------------------------------------
    # horizon rules
    def _path_tail_horizon(self) -> float:
        k, a, N, H = self.kappa, self.alpha, self.cfg.N, self.lfsm.H
        if k == 0.0:
            return 0.0
        e = 1.0 + (k - 1.0) * a
        total = N ** (H * a) / (k * a + 1.0)
        c = (abs(k) * N) ** a / (-e)
        return (self.cfg.tail_tol * total / c) ** (1.0 / e)

    def _coef_tail_horizon(self) -> float:
        X = self.hk.tail_horizon(self.alpha, self.cfg.tail_tol)
        return X * 2.0 ** self.cfg.j_max

    def _required_horizon(self, floor: float) -> float:
        t = floor
        if self.want_path:
            t = max(t, self._path_tail_horizon())
        if self.want_coeffs:
            t = max(t, self._coef_tail_horizon())
        return t

    def _check_horizon(self, t: float):
        req = self._required_horizon(0.0)
        if t < req:
            raise ConfigurationError(
                f"horizon {t:g} leaves a kernel tail alpha-mass above tail_tol="
                f"{self.cfg.tail_tol:g}; need at least {req:.6g}"
            )

    # ------------------------------------------------------------------
    # kernels
    def _path_kernel(self, y):
        return np.where(y > 0, np.abs(y) ** self.kappa, 0.0)

    def _coef_kernel(self, j: int, x, step: float):
        amp = 2.0 ** (j * (self.kappa + 0.5))
        return amp * self.hk.on_grid(x, step)

    def _conv(self, zone: _Zone, t_out: np.ndarray, l_min: int, kernel_at) -> tuple:
        """Kernel samples ``G[l] = K((l - 1/2) step)`` for ``l >= l_min``."""
        p = np.rint((t_out - zone.u0) / zone.step).astype(np.int64)
        l_max = int(p.max())
        l = np.arange(l_min, l_max + 1)
        g = kernel_at((l - 0.5) * zone.step)
        return g, p - l_min

    def _finalise(self, zone: _Zone, items: list) -> list:
        length = max(g.size for g, _ in items)
        zone.nfft = sfft.next_fast_len(length + zone.n - 1, real=True)
        return [_ConvOutput(sfft.rfft(g, zone.nfft), pos) for g, pos in items]

    def _build_fine(self):
        z = self.fine
        items = []
        N = self.cfg.N
        if self.want_path:
            t = np.arange(N + 1, dtype=float)
            items.append(self._conv(z, t, 1, self._path_kernel))
        if self.want_coeffs:
            for j in self.cfg.octaves:
                nj = coef_count(N, j, self.support)
                t = 2.0 ** j * np.arange(nj)
                step = z.step / 2.0 ** (j + 1)
                l_min = int(math.floor(-self.support * 2.0 ** j / z.step))
                items.append(self._conv(z, t, l_min,
                                        lambda y, j=j, step=step: self._coef_kernel(j, y / 2.0 ** j, step)))
        self.fine_out = self._finalise(z, items)

    def _build_mid(self):
        z = self.mid
        if z.n <= 0:
            self.mid_out = []
            return
        items = []
        N = self.cfg.N
        l_min = int(self.t_near) + 1
        if self.want_path:
            t = np.arange(N + 1, dtype=float)
            items.append(self._conv(z, t, l_min, self._path_kernel))
        if self.want_coeffs:
            for j in self.cfg.octaves:
                nj = coef_count(N, j, self.support)
                t = 2.0 ** j * np.arange(nj)
                items.append(self._conv(z, t, l_min,
                                        lambda y, j=j: 2.0 ** (j * (self.kappa + 0.5))
                                        * self.hk.expansion(y / 2.0 ** j)))
        self.mid_out = self._finalise(z, items)

    def _build_far(self):
        """Low-rank factors ``E`` (cells x terms) and ``V`` (outputs x terms)."""
        self.far_out = []
        if self.n_far == 0:
            return
        U = self.far_centres
        k, N = self.kappa, self.cfg.N
        q = np.arange(self.q_terms)
        if self.want_path:
            # U^k [(1 + t/U)^k - 1] = sum_{q>=1} C(k, q) U^k (N/U)^q (t/N)^q
            E = special.binom(k, q)[None, :] * (U ** k)[:, None] * (N / U)[:, None] ** q[None, :]
            E[:, 0] = 0.0
            zt = np.arange(N + 1) / N
            self.far_out.append((E, zt[:, None] ** q[None, :]))
        if self.want_coeffs:
            hk = self.hk
            for j in self.cfg.octaves:
                nj = coef_count(N, j, self.support)
                K = max(1.0, N / 2.0 ** j)
                Y = U / 2.0 ** j + hk.centre
                E = np.zeros((U.size, q.size))
                for m, s_m in enumerate(hk.series):
                    if m < self.wavelet.Q or s_m == 0.0:
                        continue
                    base = s_m * Y ** (k - m)
                    E += base[:, None] * special.binom(k - m, q)[None, :] * (K / Y)[:, None] ** q[None, :]
                E *= 2.0 ** (j * (k + 0.5))
                zk = np.arange(nj) / K
                self.far_out.append((E, zk[:, None] ** q[None, :]))

    # ------------------------------------------------------------------
    def _draw_atoms(self, rng: np.random.Generator):
        a = self.alpha
        zf = _sas_from_generator(rng, a, self.fine.n) * self.fine.step ** (1.0 / a)
        zm = _sas_from_generator(rng, a, self.mid.n) if self.mid.n > 0 else None
        zr = (_sas_from_generator(rng, a, self.n_far) * self.far_widths ** (1.0 / a)
              if self.n_far else None)
        return zf, zm, zr

    def draw(self, stream: RngStream | None = None, workers: int = 1):
        """One replicate.

        Returns
        -------
        path : ndarray or None
            ``X(0..N)`` with ``X(0) = 0``.
        grid : WaveletCoefGrid or None
        """
        stream = self.cfg.stream if stream is None else stream
        rng = stream.generator()
        zf, zm, zr = self._draw_atoms(rng)
        outs = [self._apply(self.fine, self.fine_out, zf, workers)]
        if zm is not None and self.mid_out:
            outs.append(self._apply(self.mid, self.mid_out, zm, workers))
        total = [sum(parts) for parts in zip(*outs)]
        if zr is not None:
            for i, (E, V) in enumerate(self.far_out):
                total[i] = total[i] + V @ (zr @ E)
        path = None
        idx = 0
        if self.want_path:
            y = total[0]
            path = y - y[0]
            path[0] = 0.0
            idx = 1
        grid = None
        if self.want_coeffs:
            coeffs = {j: total[idx + n] for n, j in enumerate(self.cfg.octaves)}
            grid = WaveletCoefGrid(coeffs, self.metadata(stream))
        return path, grid

    @staticmethod
    def _apply(zone: _Zone, outs: list, z: np.ndarray, workers: int) -> list:
        zs = sfft.rfft(z, zone.nfft, workers=workers)
        res = []
        for o in outs:
            full = sfft.irfft(zs * o.spectrum, zone.nfft, workers=workers)
            res.append(full[o.positions])
        return res

    def metadata(self, stream: RngStream | None = None) -> dict:
        stream = self.cfg.stream if stream is None else stream
        m = {
            "alpha": self.alpha,
            "H": self.lfsm.H,
            "N": self.cfg.N,
            "delta": self.cfg.delta,
            "T": self.t_far,
            "seed": stream.base_seed,
            "stream_id": stream.stream_id,
            "route": "direct",
        }
        if self.wavelet is not None:
            m.update(
                Q=self.wavelet.Q,
                family=self.wavelet.name,
                support=self.wavelet.support,
                N_j={str(j): coef_count(self.cfg.N, j, self.support) for j in self.cfg.octaves},
            )
        return m

    # ------------------------------------------------------------------
    # deterministic diagnostics
    def coef_scale(self, j: int) -> float:
        """Scale ``||kernel of d_{j,0}||_alpha`` of the discretised integral."""
        if not self.want_coeffs or j not in self.cfg.octaves:
            raise ConfigurationError(f"octave {j} is not synthesised")
        a = self.alpha
        amp = 2.0 ** (j * (self.kappa + 0.5))
        z = self.fine
        u = z.u0 + (np.arange(z.n) + 0.5) * z.step
        x = -u / 2.0 ** j
        s = np.sum(np.abs(amp * self.hk.on_grid(x, z.step / 2.0 ** (j + 1))) ** a) * z.step
        if self.mid.n > 0:
            um = self.mid.u0 + np.arange(self.mid.n) + 0.5
            s += np.sum(np.abs(amp * self.hk.expansion(-um / 2.0 ** j)) ** a)
        if self.n_far:
            s += np.sum(np.abs(amp * self.hk.expansion(self.far_centres / 2.0 ** j)) ** a * self.far_widths)
        return float(s ** (1.0 / a))

    def coef_scale_exact(self, j: int) -> float:
        """Continuous-model scale ``2^{j(H+1/2)} ||h||_alpha`` for comparison."""
        return float(2.0 ** (j * (self.lfsm.H + 0.5)) * self.hk.alpha_mass(self.alpha) ** (1.0 / self.alpha))

    def path_scale(self, t: int) -> float:
        """Scale of the discretised ``X(t)``."""
        a, k = self.alpha, self.kappa
        z = self.fine
        u = z.u0 + (np.arange(z.n) + 0.5) * z.step
        ker = self._path_kernel(t - u) - self._path_kernel(-u)
        s = np.sum(np.abs(ker) ** a) * z.step
        if self.mid.n > 0:
            um = -(self.mid.u0 + np.arange(self.mid.n) + 0.5)
            s += np.sum(np.abs((t + um) ** k - um ** k) ** a)
        if self.n_far:
            U = self.far_centres
            s += np.sum(np.abs(U ** k * np.expm1(k * np.log1p(t / U))) ** a * self.far_widths)
        return float(s ** (1.0 / a))


def _replicate_draws(synth: LfsmSynthesizer, streams, threads: int = 1):
    streams = list(streams)
    if threads <= 1 or len(streams) <= 1:
        return [synth.draw(s) for s in streams]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(synth.draw, streams))


def synth_lfsm_path(lfsm: LfsmSpec, cfg: SynthesisConfig) -> np.ndarray:
    """Sampled LFSM path ``X(0), ..., X(N)`` (Riemann sum of the stable integral)."""
    synth = LfsmSynthesizer(lfsm, cfg, None, path=True, coeffs=False)
    return synth.draw()[0]


def wavelet_coeffs_direct(lfsm: LfsmSpec, w: WaveletSpec, cfg: SynthesisConfig) -> WaveletCoefGrid:
    """Coefficients ``d_{j,k}`` of octaves ``j_min..j_max`` straight from the stable integral."""
    synth = LfsmSynthesizer(lfsm, cfg, w, path=False, coeffs=True)
    return synth.draw()[1]


def wavelet_coeffs_pyramidal(path, w: WaveletSpec, j_max: int, j_min: int = 1) -> WaveletCoefGrid:
    """Mallat filter bank on the samples ``X(0..N)``.

    The approximation at octave 0 is taken to be the sample sequence.
    Only coefficients computed without touching the array ends are kept;
    octave ``j`` retains ``floor(N / 2^j) - support`` of them, aligned with
    the direct route.

    Raises
    ------
    ConfigurationError
        If the path is too short for ``j_max``.
    """
    x = np.asarray(path, dtype=float)
    if x.ndim != 1:
        raise ShapeError("path must be one-dimensional")
    N = x.size - 1
    j_max = int(j_max)
    S = w.support
    if N < 2 ** j_max * (S + 1):
        raise ConfigurationError(
            f"path of {x.size} samples is too short for j_max={j_max} (support {S})"
        )
    h = w.lowpass
    g = w.highpass
    L = h.size
    a = x
    coeffs = {}
    for j in range(1, j_max + 1):
        n_valid = (a.size - L) // 2 + 1
        approx = np.zeros(n_valid)
        detail = np.zeros(n_valid)
        for n in range(L):
            seg = a[n:n + 2 * n_valid - 1:2]
            approx += h[n] * seg
            detail += g[n] * seg
        if j >= j_min:
            nj = coef_count(N, j, S)
            if nj > detail.size:
                raise ConfigurationError(f"not enough valid coefficients at octave {j}")
            coeffs[j] = detail[:nj].copy()
        a = approx
    meta = {
        "N": N,
        "Q": w.Q,
        "family": w.name,
        "support": S,
        "N_j": {str(j): int(v.size) for j, v in coeffs.items()},
        "route": "pyramidal",
    }
    return WaveletCoefGrid(coeffs, meta)


def scale_kernel_pair(lfsm: LfsmSpec, w: WaveletSpec, j: int, k: int, n: int,
                      delta: float = 1.0 / 16.0, horizon: float | None = None):
    """Discrete kernels of ``(d_{j,n}, d_{k,0})`` on a common grid.

    The random measure is discretised with cells of width ``delta`` on
    ``[-horizon, 2^j (n + support)]``; the default horizon is
    ``64 * 2^k * support``.
    """
    from ..depmeas import KernelPair

    j, k, n = int(j), int(k), int(n)
    if j > k:
        raise ParameterError("scale_kernel_pair needs j <= k")
    e = math.log2(delta)
    if abs(e - round(e)) > 1e-12:
        raise ParameterError("delta must be a power of two")
    hk = get_kernel(lfsm, w)
    S = w.support
    T = float(horizon) if horizon is not None else 64.0 * 2 ** k * S
    i_lo = int(math.floor(-T / delta))
    i_hi = int(math.ceil(max(2 ** j * (n + S), 2 ** k * S) / delta))
    u = (np.arange(i_lo, i_hi) + 0.5) * delta
    aj = 2.0 ** (j * (lfsm.kappa + 0.5))
    ak = 2.0 ** (k * (lfsm.kappa + 0.5))
    f = aj * hk.on_grid(n - u / 2.0 ** j, delta / 2.0 ** (j + 1))
    g = ak * hk.on_grid(-u / 2.0 ** k, delta / 2.0 ** (k + 1))
    keep = (f != 0) | (g != 0)
    return KernelPair.from_arrays(f[keep], g[keep], lfsm.alpha, np.full(int(keep.sum()), delta))
