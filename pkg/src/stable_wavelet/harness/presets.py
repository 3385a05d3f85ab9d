"""Named configurations used by the command line and the acceptance suite."""
from __future__ import annotations

from ..depmeas import KernelPair, MovingAverageSpec
from ..errors import ConfigurationError
from .clt import CltRunConfig
from .functionals import FunctionalSpec

__all__ = ["clt_preset", "bounds_preset", "CLT_PRESETS", "BOUNDS_PRESETS"]

CLT_PRESETS = ("iid-bounded", "iid-log", "power-log")
BOUNDS_PRESETS = ("thm22-default",)


def clt_preset(name: str, seed: int = 0, threads: int = 1) -> CltRunConfig:
    """``iid-bounded``: i.i.d. SaS(1.5) with ``min(|x|, 1)``, ``R=500``, ``N <= 2^12``.
    ``iid-log``: same sequence with ``log2|x|``.
    ``power-log``: ``a(x) = x^-2.5 1{x >= 1}``, ``alpha=1.5``, ``log2|x|``,
    ``N = 2^10..2^14``, ``R=200``.
    """
    iid = MovingAverageSpec("indicator", {"lo": 0.0, "hi": 1.0}, 1.5, delta=1.0)
    if name == "iid-bounded":
        return CltRunConfig(iid, FunctionalSpec("bounded-clip", {"c": 1.0}),
                            N_values=tuple(2 ** k for k in range(8, 13)), R=500, seed=seed,
                            lag_cap=32, threads=threads, config_id=name)
    if name == "iid-log":
        return CltRunConfig(iid, FunctionalSpec("log2abs"),
                            N_values=tuple(2 ** k for k in range(8, 13)), R=500, seed=seed,
                            lag_cap=32, threads=threads, config_id=name)
    if name == "power-log":
        spec = MovingAverageSpec("power", {"p": 2.5}, 1.5)
        return CltRunConfig(spec, FunctionalSpec("log2abs"),
                            N_values=tuple(2 ** k for k in range(10, 15)), R=200, seed=seed,
                            lag_cap=256, threads=threads, config_id=name)
    raise ConfigurationError(f"unknown CLT preset {name!r}; choose from {CLT_PRESETS}")


def bounds_preset(name: str) -> dict:
    """Keyword arguments for ``verify_cov_bound_b``."""
    if name == "thm22-default":
        return {"pair": KernelPair.from_arrays([1.0, 0.4], [0.4, 1.0], 1.5), "beta": 0.5,
                "b_values": [1.0, 2.0, 4.0], "mc": 10 ** 6}
    raise ConfigurationError(f"unknown bounds preset {name!r}; choose from {BOUNDS_PRESETS}")
