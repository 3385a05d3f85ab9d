"""Symmetric alpha-stable variates, reproducible random streams and
finite-kernel stable integrals.

A stable integral ``xi = int f dM`` against an SaS random measure with
control measure ``mu`` is represented here by a finite list of atoms
``(mu_i, f_i)``; then ``xi = sum_i f_i mu_i**(1/alpha) Z_i`` with ``Z_i``
i.i.d. standard SaS and the scale of ``xi`` is ``||f||_alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError, ShapeError

__all__ = [
    "StableParams",
    "RngStream",
    "DiscreteKernel",
    "splitmix64",
    "sample_sas",
    "alpha_norm",
    "alpha_norm_pow",
    "joint_char_fn",
    "sample_joint",
    "signed_power",
    "check_shared_atoms",
]

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """SplitMix64 output function (one increment plus the avalanche finalizer)."""
    z = (int(x) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class StableParams:
    """Stability index and scale of a symmetric alpha-stable law.

    The characteristic function is ``exp(-scale**alpha * |theta|**alpha)``.
    """

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        a, s = float(self.alpha), float(self.scale)
        if not (np.isfinite(a) and 0.0 < a <= 2.0):
            raise ParameterError(f"alpha must lie in (0, 2], got {self.alpha!r}")
        if not (np.isfinite(s) and s > 0.0):
            raise ParameterError(f"scale must be positive, got {self.scale!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "scale", s)


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream.

    The PCG64 seed is ``splitmix64(splitmix64(base_seed) ^ stream_id)``.
    Mixing the base seed before combining keeps ``(b, s)`` and ``(s, b)``
    (and any other XOR-equal pairs) apart.
    """

    base_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("base_seed", "stream_id"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ParameterError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v) & _MASK64)

    @property
    def seed(self) -> int:
        return splitmix64(splitmix64(self.base_seed) ^ self.stream_id)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, index: int) -> "RngStream":
        """Child stream, e.g. one per Monte Carlo replicate."""
        return RngStream(self.base_seed, splitmix64(self.stream_id ^ splitmix64(int(index) + 1)))


def _sas_from_generator(rng: np.random.Generator, alpha: float, size) -> np.ndarray:
    """Standard SaS draws by the Chambers-Mallows-Stuck transform."""
    theta = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size=size)
    w = rng.standard_exponential(size=size)
    if alpha == 1.0:
        return np.tan(theta)
    if alpha == 2.0:
        # sin(2t)/sqrt(cos t) * sqrt(W / cos t) = 2 sin(t) sqrt(W), which is N(0, 2)
        return 2.0 * np.sin(theta) * np.sqrt(w)
    c = np.cos(theta)
    return (np.sin(alpha * theta) / c ** (1.0 / alpha)) * (
        np.cos((1.0 - alpha) * theta) / w
    ) ** ((1.0 - alpha) / alpha)


def sample_sas(params: StableParams, stream: RngStream | np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. SaS(alpha, scale) variates.

    Parameters
    ----------
    params : StableParams
    stream : RngStream or numpy Generator
        An ``RngStream`` restarts from its origin on every call, so equal
        inputs give bit-identical outputs.  A ``Generator`` is consumed.
    n : int
        Number of samples, at least 1.
    """
    if not isinstance(params, StableParams):
        raise ParameterError("params must be a StableParams instance")
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = stream.generator() if isinstance(stream, RngStream) else stream
    return params.scale * _sas_from_generator(rng, params.alpha, n)


@dataclass(frozen=True)
class DiscreteKernel:
    """Finite kernel: atom masses ``mu_i > 0`` and values ``f_i``."""

    values: np.ndarray
    masses: np.ndarray = field(default=None)

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.ndim != 1 or vals.size == 0:
            raise ShapeError("a kernel needs a nonempty one-dimensional list of values")
        if self.masses is None:
            mass = np.ones_like(vals)
        else:
            mass = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if mass.shape != vals.shape:
            raise ShapeError(f"masses {mass.shape} and values {vals.shape} differ in shape")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("kernel values must be finite")
        if not (np.all(np.isfinite(mass)) and np.all(mass > 0)):
            raise ParameterError("atom masses must be finite and positive")
        vals.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "masses", mass)

    def __len__(self):
        return self.values.size

    def scaled(self, c: float) -> "DiscreteKernel":
        return DiscreteKernel(c * self.values, self.masses)


def _check_alpha(alpha, lo_open=0.0, hi=2.0, hi_closed=True):
    a = float(alpha)
    ok = a > lo_open and (a <= hi if hi_closed else a < hi)
    if not (np.isfinite(a) and ok):
        bracket = "]" if hi_closed else ")"
        raise ParameterError(f"alpha must lie in ({lo_open:g}, {hi:g}{bracket}, got {alpha!r}")
    return a


def check_shared_atoms(*kernels: DiscreteKernel) -> np.ndarray:
    """Return the common mass vector, or raise if the atom sets differ."""
    if not kernels:
        raise ShapeError("no kernels given")
    mass = kernels[0].masses
    for k in kernels[1:]:
        if k.masses.shape != mass.shape or not np.array_equal(k.masses, mass):
            raise ShapeError("kernels do not share the same atom index set")
    return mass


def alpha_norm_pow(k: DiscreteKernel, alpha: float) -> float:
    """``sum_i mu_i |f_i|**alpha``, the alpha-th power of the scale."""
    a = _check_alpha(alpha)
    return float(np.sum(k.masses * np.abs(k.values) ** a))


def alpha_norm(k: DiscreteKernel, alpha: float) -> float:
    """Scale coefficient ``(sum_i mu_i |f_i|**alpha)**(1/alpha)``."""
    a = _check_alpha(alpha)
    return alpha_norm_pow(k, a) ** (1.0 / a)


def joint_char_fn(f: DiscreteKernel, g: DiscreteKernel, alpha: float, u, v):
    """Joint characteristic function ``E exp(i(u xi + v eta))`` of a kernel pair.

    ``u`` and ``v`` broadcast against each other.
    """
    a = _check_alpha(alpha)
    mass = check_shared_atoms(f, g)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s = np.abs(u[..., None] * f.values + v[..., None] * g.values) ** a @ mass
    out = np.exp(-s)
    return float(out) if out.ndim == 0 else out


def sample_joint(
    kernels: Sequence[DiscreteKernel],
    alpha: float,
    stream: RngStream | np.random.Generator,
    n: int,
    chunk: int = 1 << 20,
) -> np.ndarray:
    """Joint draws of ``(int f_1 dM, ..., int f_m dM)``.

    Returns an array of shape ``(n, len(kernels))``.  Draws are generated
    row by row in blocks of at most ``chunk`` variates, so memory stays
    bounded for large atom counts.
    """
    a = _check_alpha(alpha)
    kernels = list(kernels)
    mass = check_shared_atoms(*kernels)
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = stream.generator() if isinstance(stream, RngStream) else stream
    weights = np.stack([k.values for k in kernels], axis=1) * (mass ** (1.0 / a))[:, None]
    m = mass.size
    rows = max(1, chunk // m)
    out = np.empty((n, len(kernels)))
    for start in range(0, n, rows):
        stop = min(n, start + rows)
        z = _sas_from_generator(rng, a, (stop - start, m))
        out[start:stop] = z @ weights
    return out


def signed_power(a, p):
    """``sign(a) |a|**p``, with ``0**p = 0`` for ``p > 0``.

    Raises
    ------
    DomainError
        If some ``a == 0`` while ``p <= 0``.
    """
    arr = np.asarray(a, dtype=float)
    p = float(p)
    if p <= 0 and np.any(arr == 0):
        raise DomainError(f"0 raised to the non-positive power {p}")
    out = np.sign(arr) * np.abs(arr) ** p
    return float(out) if out.ndim == 0 else out
