"""Registered functionals ``K`` applied to stable moving averages.

Each kind comes with a short argument for the growth conditions used by
the covariance bounds and the CLT:

``log2abs``
    ``K(x) = log2|x|``.  ``|K(x)| <= C(|x|^b + |x|^-b)`` for any small
    ``b > 0``; ``K(x)/x`` is decreasing for ``x > e`` since
    ``d/dx (ln x / x) = (1 - ln x)/x^2``; bounded on ``|x| <= x0`` away from
    the integrable singularity at 0.
``abspow``
    ``K(x) = |x|^beta`` with ``beta in (-1, alpha/2)``.  ``K(x)/x = x^(beta-1)``
    is decreasing because ``beta < 1``; the singularity at 0 for
    ``beta < 0`` is integrable against the stable density.
``bounded-clip``
    ``K(x) = min(|x|, c)``.  Bounded, so the growth and local conditions
    hold trivially and ``K(x)/x = c/x`` is decreasing for ``x > c``.
``indicator``
    ``K(x) = 1{lo < x <= hi}``.  Bounded and integrable when the interval
    is finite.
``custom``
    Any vectorised callable; accepted only with ``unchecked=True``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import DataError, ParameterError
from ..estimators import abs_moment

__all__ = ["FunctionalSpec", "KINDS", "EULER_GAMMA"]

KINDS = ("log2abs", "abspow", "bounded-clip", "indicator", "custom")
EULER_GAMMA = float(np.euler_gamma)
LN2 = math.log(2.0)


@dataclass(frozen=True)
class FunctionalSpec:
    """A functional ``K`` with its parameters.

    Parameters
    ----------
    kind : str
        One of ``KINDS``.
    params : dict
        ``abspow``: ``beta``; ``bounded-clip``: ``c`` (default 1);
        ``indicator``: ``lo`` and ``hi`` (defaults 0 and ``inf``).
    func : callable, optional
        For ``custom`` only.
    unchecked : bool
        Must be ``True`` for ``custom``: the growth and monotonicity
        conditions are then the caller's responsibility.
    """

    kind: str
    params: dict = field(default_factory=dict)
    func: Optional[Callable] = None
    unchecked: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"functional kind must be one of {KINDS}, got {self.kind!r}")
        p = dict(self.params)
        if self.kind == "abspow":
            if "beta" not in p:
                raise ParameterError("abspow needs a 'beta' parameter")
            b = float(p["beta"])
            if not (-1.0 < b < 1.0) or b == 0.0:
                raise ParameterError(f"abspow beta must lie in (-1, alpha/2) and be nonzero, got {b}")
            p["beta"] = b
        elif self.kind == "bounded-clip":
            c = float(p.get("c", 1.0))
            if not c > 0:
                raise ParameterError("bounded-clip needs c > 0")
            p["c"] = c
        elif self.kind == "indicator":
            lo = float(p.get("lo", 0.0))
            hi = float(p.get("hi", math.inf))
            if not hi > lo:
                raise ParameterError("indicator needs hi > lo")
            p.update(lo=lo, hi=hi)
        elif self.kind == "custom":
            if self.func is None:
                raise ParameterError("custom functional needs func")
            if not self.unchecked:
                raise ParameterError(
                    "custom functionals must be flagged unchecked=True: growth and "
                    "monotonicity conditions are not verified"
                )
        object.__setattr__(self, "params", p)

    @classmethod
    def parse(cls, text: str) -> "FunctionalSpec":
        """Parse ``log2abs``, ``abspow:0.4``, ``bounded-clip:1`` or ``indicator:0,inf``."""
        kind, _, arg = str(text).partition(":")
        kind = kind.strip()
        if kind == "abspow":
            return cls(kind, {"beta": float(arg)})
        if kind == "bounded-clip":
            return cls(kind, {"c": float(arg)} if arg else {})
        if kind == "indicator":
            if not arg:
                return cls(kind)
            lo, hi = (float(s) for s in arg.split(","))
            return cls(kind, {"lo": lo, "hi": hi})
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind == "abspow":
            return f"abspow:{self.params['beta']:g}"
        if self.kind == "bounded-clip":
            return f"bounded-clip:{self.params['c']:g}"
        if self.kind == "indicator":
            return f"indicator:{self.params['lo']:g},{self.params['hi']:g}"
        return self.kind

    @property
    def integrable(self) -> bool:
        """Whether ``K`` lies in ``L^1`` (finite-interval indicators only)."""
        return self.kind == "indicator" and math.isfinite(self.params["lo"]) and math.isfinite(
            self.params["hi"])

    def check_alpha(self, alpha: float):
        """Raise if the parameters are inadmissible for stability index ``alpha``."""
        if self.kind == "abspow" and not self.params["beta"] < alpha / 2.0:
            raise ParameterError(
                f"abspow beta={self.params['beta']} must be < alpha/2 = {alpha / 2}"
            )

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = self.kind
        with np.errstate(divide="ignore", invalid="ignore"):
            if k == "log2abs":
                out = np.log2(np.abs(x))
            elif k == "abspow":
                out = np.abs(x) ** self.params["beta"]
            elif k == "bounded-clip":
                out = np.minimum(np.abs(x), self.params["c"])
            elif k == "indicator":
                out = ((x > self.params["lo"]) & (x <= self.params["hi"])).astype(float)
            else:
                out = np.asarray(self.func(x), dtype=float)
        if not np.all(np.isfinite(out)):
            bad = int(np.count_nonzero(~np.isfinite(out)))
            raise DataError(f"{self.label} is non-finite on {bad} sample(s) (e.g. log of an exact 0)")
        return out

    def exact_mean(self, alpha: float, scale: float = 1.0) -> Optional[float]:
        """``E K(X)`` for ``X`` SaS(alpha, scale) when known in closed form."""
        if self.kind == "log2abs":
            return (EULER_GAMMA * (1.0 / alpha - 1.0) + math.log(scale)) / LN2
        if self.kind == "abspow":
            return abs_moment(self.params["beta"], alpha, scale)
        if self.kind == "indicator":
            lo, hi = self.params["lo"], self.params["hi"]
            if lo == 0.0 and hi == math.inf:
                return 0.5
            if lo == -math.inf and hi == 0.0:
                return 0.5
        return None

    def exact_var(self, alpha: float, scale: float = 1.0) -> Optional[float]:
        """``Var K(X)`` for ``X`` SaS(alpha, scale) when known in closed form."""
        if self.kind == "log2abs":
            return math.pi ** 2 / 12.0 * (1.0 + 2.0 / alpha ** 2) / LN2 ** 2
        if self.kind == "abspow":
            b = self.params["beta"]
            if 2 * b >= alpha or 2 * b <= -1:
                return None
            return abs_moment(2 * b, alpha, scale) - abs_moment(b, alpha, scale) ** 2
        m = self.exact_mean(alpha, scale)
        if self.kind == "indicator" and m is not None:
            return m * (1.0 - m)
        return None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "unchecked": self.unchecked}

