"""Sampling of discretised stable moving averages ``xi_n = int a(n - x) M(dx)``.

The control measure is split into cells of width ``delta = 1/r`` on a
lattice containing the integers, exactly as in ``ma_kernel_pair``; the
kernel is sampled at cell midpoints and truncated at its horizon.  Then

    xi_n = delta^(1/alpha) sum_l G[l] Z[n r + L - 1 - l],

a strided convolution of one i.i.d. SaS atom sequence with ``G``.  Paths
are produced in fixed-size chunks, so the atom sequence (and hence every
value) does not depend on the path length requested.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import signal

from ..depmeas import MovingAverageSpec
from ..errors import ConfigurationError
from ..stable_core import RngStream, _sas_from_generator

__all__ = ["MaSynthesizer"]

CHUNK = 1 << 13


class MaSynthesizer:
    """Repeated draws of ``xi_0, ..., xi_{N-1}`` for one kernel.

    Raises
    ------
    ConfigurationError
        If ``1/delta`` is not an integer.
    """

    def __init__(self, spec: MovingAverageSpec):
        d = float(spec.delta)
        r = int(round(1.0 / d))
        if r < 1 or abs(r * d - 1.0) > 1e-12:
            raise ConfigurationError(f"1/delta must be an integer, got delta={d}")
        self.spec = spec
        self.alpha = spec.alpha
        self.r = r
        t = spec.effective_horizon()
        x0 = math.floor(spec.support_start * r + 1e-9) / r
        n_cells = int(math.ceil((t - x0) * r - 1e-9))
        x = x0 + (np.arange(n_cells) + 0.5) / r
        g = spec.truncated_a(x) * d ** (1.0 / self.alpha)
        nz = np.flatnonzero(g)
        if nz.size == 0:
            raise ConfigurationError("kernel vanishes on the discretisation grid")
        # drop trailing zeros beyond the horizon
        self.G = g[: nz[-1] + 1].copy()
        self.L = self.G.size
        self.G.setflags(write=False)

    @property
    def scale(self) -> float:
        """``||a||_alpha`` of the discretised kernel (the marginal scale)."""
        return float(np.sum(np.abs(self.G) ** self.alpha) ** (1.0 / self.alpha))

    def atoms_needed(self, N: int) -> int:
        return (int(N) - 1) * self.r + self.L

    def path(self, stream: RngStream | np.random.Generator, N: int) -> np.ndarray:
        """``xi_0..xi_{N-1}``."""
        N = int(N)
        if N < 1:
            raise ConfigurationError("N must be >= 1")
        rng = stream.generator() if isinstance(stream, RngStream) else stream
        a = self.alpha
        r = self.r
        carry = _sas_from_generator(rng, a, self.L - 1)
        out = np.empty(N)
        for start in range(0, N, CHUNK):
            nc = min(CHUNK, N - start)
            # atoms are always drawn in full chunks to keep the stream layout fixed
            new = _sas_from_generator(rng, a, CHUNK * r)
            z = np.concatenate([carry, new[: nc * r]])
            if self.L == 1:
                v = z * self.G[0]
            else:
                v = signal.oaconvolve(z, self.G, mode="valid")
            out[start:start + nc] = v[::r][:nc]
            carry = z[nc * r:]
        return out
