"""Dependence measures for jointly SaS pairs given by finite kernels.

For ``(xi, eta) = (int f dM, int g dM)`` the quantities computed here are

* ``m1_star(f, g) = sum mu |f|**(alpha-1) |g|`` and its symmetrisation ``m1``;
* ``m2 = sum mu |f g|**(alpha/2)``;
* ``U(u, v) = exp(-||uf+vg||^a) - exp(-||uf||^a - ||vg||^a)`` and
  ``I(u, v) = ||uf+vg||^a - ||uf||^a - ||vg||^a`` (``||.||^a`` denotes the
  alpha-th power of the scale), with the codifference ``-I(1, -1)``;
* the non-degeneracy constants ``eps1`` (Hoelder gap) and ``eps2`` (joint
  coercivity on the unit "circle").

Moving-average pairs ``(a(-x), a(n-x))`` are discretised by midpoint rules.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import optimize

from .errors import DomainError, ParameterError, ShapeError, SingularityError
from .stable_core import DiscreteKernel, alpha_norm_pow, check_shared_atoms

__all__ = [
    "KernelPair",
    "DependenceReport",
    "MovingAverageSpec",
    "SummabilityReport",
    "m1_star",
    "m1",
    "m2",
    "u_measure",
    "i_measure",
    "codifference",
    "du_measure",
    "dudv_measure",
    "lemma31_bound",
    "lemma31_ratio",
    "estimate_eps1",
    "estimate_eps2",
    "representation_transform",
    "dependence_report",
    "ma_kernel_pair",
    "check_summability",
]

BOUNDS = ("product", "balanced", "gap")


@dataclass(frozen=True)
class KernelPair:
    """Two kernels on a common atom set together with the stability index."""

    f: DiscreteKernel
    g: DiscreteKernel
    alpha: float

    def __post_init__(self):
        f = self.f if isinstance(self.f, DiscreteKernel) else DiscreteKernel(self.f)
        g = self.g if isinstance(self.g, DiscreteKernel) else DiscreteKernel(self.g, f.masses)
        check_shared_atoms(f, g)
        a = float(self.alpha)
        if not (np.isfinite(a) and 0.0 < a < 2.0):
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha!r}")
        if alpha_norm_pow(f, a) <= 0 or alpha_norm_pow(g, a) <= 0:
            raise ParameterError("both kernels must have a positive scale")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_arrays(cls, f, g, alpha, masses=None) -> "KernelPair":
        fk = DiscreteKernel(f, masses)
        return cls(fk, DiscreteKernel(g, fk.masses), alpha)

    @property
    def mu(self) -> np.ndarray:
        return self.f.masses

    @property
    def norm_f_pow(self) -> float:
        return alpha_norm_pow(self.f, self.alpha)

    @property
    def norm_g_pow(self) -> float:
        return alpha_norm_pow(self.g, self.alpha)

    def swapped(self) -> "KernelPair":
        return KernelPair(self.g, self.f, self.alpha)


def _need_alpha_gt1(p: KernelPair, what: str):
    if not 1.0 < p.alpha < 2.0:
        raise DomainError(f"{what} requires alpha in (1, 2), got {p.alpha}")


def m1_star(p: KernelPair) -> float:
    """``sum mu |f|**(alpha-1) |g|``."""
    _need_alpha_gt1(p, "m1_star")
    return float(np.sum(p.mu * np.abs(p.f.values) ** (p.alpha - 1.0) * np.abs(p.g.values)))


def m1(p: KernelPair) -> float:
    """Symmetrised first measure ``m1_star(f, g) + m1_star(g, f)``."""
    return m1_star(p) + m1_star(p.swapped())


def m2(p: KernelPair) -> float:
    """``sum mu |f g|**(alpha/2)``."""
    return float(np.sum(p.mu * np.abs(p.f.values * p.g.values) ** (0.5 * p.alpha)))


def _joint_pow(p: KernelPair, u, v):
    """``||uf + vg||^alpha`` (alpha-th power of the scale), broadcasting u, v."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.abs(u[..., None] * p.f.values + v[..., None] * p.g.values) ** p.alpha @ p.mu


def _sep_pow(p: KernelPair, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    a = p.alpha
    return np.abs(u) ** a * p.norm_f_pow + np.abs(v) ** a * p.norm_g_pow


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _on_axes(u, v):
    # U and I vanish identically when u or v is 0; the two power sums round differently there
    return (np.asarray(u) == 0) | (np.asarray(v) == 0)


def u_measure(p: KernelPair, u, v):
    """``U(u, v)``: joint minus product characteristic functions."""
    d = np.exp(-_joint_pow(p, u, v)) - np.exp(-_sep_pow(p, u, v))
    return _scalar(np.where(_on_axes(u, v), 0.0, d))


def i_measure(p: KernelPair, u, v):
    """``I(u, v)``: joint minus separate characteristic exponents."""
    d = _joint_pow(p, u, v) - _sep_pow(p, u, v)
    return _scalar(np.where(_on_axes(u, v), 0.0, d))


def codifference(p: KernelPair) -> float:
    return -float(i_measure(p, 1.0, -1.0))


def du_measure(p: KernelPair, u: float, v: float) -> float:
    """Partial derivative of ``U`` in ``u`` at a point."""
    _need_alpha_gt1(p, "du_measure")
    a, mu, f, g = p.alpha, p.mu, p.f.values, p.g.values
    u, v = float(u), float(v)
    s = u * f + v * g
    e_joint = math.exp(-float(np.sum(mu * np.abs(s) ** a)))
    e_sep = math.exp(-float(_sep_pow(p, u, v)))
    t1 = float(np.sum(mu * signed_power_safe(s, a - 1.0) * f))
    t2 = float(np.sum(mu * signed_power_safe(u * f, a - 1.0) * f))
    return -a * t1 * e_joint + a * t2 * e_sep


def signed_power_safe(x: np.ndarray, q: float) -> np.ndarray:
    """``sign(x)|x|**q`` for ``q > 0`` (zero maps to zero)."""
    return np.sign(x) * np.abs(x) ** q


def _singular_atoms(p: KernelPair, u: float, v: float) -> np.ndarray:
    f, g = p.f.values, p.g.values
    uf, vg = u * f, v * g
    both = (f != 0) & (g != 0)
    return np.flatnonzero(both & (np.abs(uf + vg) <= 1e-12 * (np.abs(uf) + np.abs(vg))))


def dudv_measure(p: KernelPair, u: float, v: float) -> float:
    """Mixed partial derivative of ``U`` in ``(u, v)`` at a point.

    Terms with a vanishing factor ``f_i`` or ``g_i`` are taken as zero.

    Raises
    ------
    SingularityError
        When some atom has ``f_i g_i != 0`` and ``u f_i + v g_i = 0``, where
        the formula diverges for alpha < 2.
    """
    _need_alpha_gt1(p, "dudv_measure")
    u, v = float(u), float(v)
    bad = _singular_atoms(p, u, v)
    if bad.size:
        raise SingularityError(
            f"u*f + v*g vanishes at atom {int(bad[0])} where f*g != 0 (u={u}, v={v})",
            atom=int(bad[0]),
        )
    a, mu, f, g = p.alpha, p.mu, p.f.values, p.g.values
    s = u * f + v * g
    fg = f * g
    active = fg != 0
    t0 = float(np.sum(mu[active] * np.abs(s[active]) ** (a - 2.0) * fg[active]))
    sp = signed_power_safe(s, a - 1.0)
    tf = float(np.sum(mu * sp * f))
    tg = float(np.sum(mu * sp * g))
    sf = float(np.sum(mu * signed_power_safe(u * f, a - 1.0) * f))
    sg = float(np.sum(mu * signed_power_safe(v * g, a - 1.0) * g))
    e_joint = math.exp(-float(np.sum(mu * np.abs(s) ** a)))
    e_sep = math.exp(-float(_sep_pow(p, u, v)))
    return (-a * (a - 1.0) * t0 + a * a * tf * tg) * e_joint - a * a * sf * sg * e_sep


def lemma31_bound(p: KernelPair, u, v, bound: str = "product"):
    """Upper bound for ``|U(u, v)|`` of the selected form.

    ``"product"``: ``2|uv|^{a/2} m2``; ``"balanced"`` adds the factor
    ``exp(-(|u|^{a/2}||f||^{a/2} - |v|^{a/2}||g||^{a/2})^2)``; ``"gap"`` adds
    ``exp(-2(||f||^{a/2}||g||^{a/2} - m2)|uv|^{a/2})``.
    """
    if bound not in BOUNDS:
        raise ParameterError(f"bound must be one of {BOUNDS}, got {bound!r}")
    a = p.alpha
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    q = np.abs(u * v) ** (0.5 * a)
    mm = m2(p)
    base = 2.0 * q * mm
    if bound == "product":
        return _scalar(base)
    nf = p.norm_f_pow ** 0.5
    ng = p.norm_g_pow ** 0.5
    if bound == "balanced":
        d = np.abs(u) ** (0.5 * a) * nf - np.abs(v) ** (0.5 * a) * ng
        return _scalar(base * np.exp(-d * d))
    return _scalar(base * np.exp(-2.0 * (nf * ng - mm) * q))


def lemma31_ratio(p: KernelPair, grid, bound: str = "product") -> float:
    """Maximum of ``|U| / bound`` over a grid of ``(u, v)`` points.

    ``grid`` is an array of shape ``(n, 2)``.  Points where both ``U`` and
    the bound vanish count as 0; ``U != 0`` against a zero bound gives ``inf``.
    """
    pts = np.asarray(grid, dtype=float).reshape(-1, 2)
    uu, vv = pts[:, 0], pts[:, 1]
    num = np.abs(np.asarray(u_measure(p, uu, vv)))
    den = np.asarray(lemma31_bound(p, uu, vv, bound))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))
    return float(np.max(r)) if r.size else 0.0


def estimate_eps1(p: KernelPair) -> float:
    """Hoelder gap ``1 - m2 / (||f||^{a/2} ||g||^{a/2})``, clipped to [0, 1]."""
    r = m2(p) / math.sqrt(p.norm_f_pow * p.norm_g_pow)
    return float(min(1.0, max(0.0, 1.0 - r)))


def _eps2_objective(p: KernelPair):
    a = p.alpha
    nf = p.norm_f_pow ** (1.0 / a)
    ng = p.norm_g_pow ** (1.0 / a)

    def coords(theta):
        c, s = np.cos(theta), np.sin(theta)
        return (np.sign(c) * np.abs(c) ** (2.0 / a) / nf, np.sign(s) * np.abs(s) ** (2.0 / a) / ng)

    def obj(theta):
        u, v = coords(theta)
        return _joint_pow(p, u, v)

    return obj


def estimate_eps2(p: KernelPair, n_grid: int = 512, xtol: float = 1e-8, n_refine: int = 4) -> float:
    """Infimum of ``||uf+vg||^a`` over ``|u|^a||f||^a + |v|^a||g||^a = 1``.

    The constraint set is parameterised by an angle ``theta`` in ``[0, pi)``
    (the objective is even), scanned on ``n_grid`` points; the best local
    minima are polished by bounded Brent search (golden-section steps with
    parabolic acceleration) on the neighbouring grid cells.
    """
    obj = _eps2_objective(p)
    theta = np.arange(n_grid) * (np.pi / n_grid)
    vals = np.asarray(obj(theta), dtype=float)
    best = float(vals.min())
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    cand = np.flatnonzero((vals <= left) & (vals <= right))
    cand = cand[np.argsort(vals[cand])][:n_refine]
    step = np.pi / n_grid
    for i in cand:
        lo, hi = theta[i] - step, theta[i] + step
        res = optimize.minimize_scalar(
            lambda t: float(obj(t)), bounds=(lo, hi), method="bounded", options={"xatol": xtol}
        )
        best = min(best, float(res.fun))
    return float(min(1.0, max(0.0, best)))


def representation_transform(p: KernelPair, h, relabel=None) -> KernelPair:
    """Equivalent representation ``f/h, g/h`` with masses ``|h|^a mu``.

    ``relabel`` is a permutation applied to the atom order.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != p.mu.shape:
        raise ShapeError("h must give one factor per atom")
    if np.any(h == 0) or not np.all(np.isfinite(h)):
        raise ParameterError("all factors h_i must be finite and nonzero")
    perm = np.arange(h.size) if relabel is None else np.asarray(relabel, dtype=int)
    if perm.shape != h.shape or not np.array_equal(np.sort(perm), np.arange(h.size)):
        raise ParameterError("relabel must be a permutation of the atom indices")
    mu = np.abs(h) ** p.alpha * p.mu
    f = p.f.values / h
    g = p.g.values / h
    return KernelPair.from_arrays(f[perm], g[perm], p.alpha, mu[perm])


@dataclass
class DependenceReport:
    m1_star_fg: Optional[float]
    m1_star_gf: Optional[float]
    m1: Optional[float]
    m2: float
    codifference: float
    eps1: float
    eps2: float
    alpha: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def dependence_report(p: KernelPair, n_grid: int = 512) -> DependenceReport:
    """All measures for a pair; the first-order ones are ``None`` when alpha <= 1."""
    if 1.0 < p.alpha < 2.0:
        a1, a2 = m1_star(p), m1_star(p.swapped())
        mm1 = a1 + a2
    else:
        a1 = a2 = mm1 = None
    return DependenceReport(
        m1_star_fg=a1,
        m1_star_gf=a2,
        m1=mm1,
        m2=m2(p),
        codifference=codifference(p),
        eps1=estimate_eps1(p),
        eps2=estimate_eps2(p, n_grid=n_grid),
        alpha=p.alpha,
    )


# ---------------------------------------------------------------------------
# moving averages


_FAMILIES = ("power", "indicator", "custom")


@dataclass(frozen=True)
class MovingAverageSpec:
    """Kernel ``a`` of a moving average ``xi_n = int a(n - x) M(dx)``.

    Families
    --------
    ``power``
        ``a(x) = x**(-p)`` for ``x >= 1`` and 0 otherwise (``params={'p': ...}``).
    ``indicator``
        ``a(x) = 1`` on ``[lo, hi)`` (default ``[0, 1)``).
    ``custom``
        ``func`` is a vectorised callable vanishing left of ``causal_shift``.

    ``delta`` is the midpoint-rule step and ``horizon`` the truncation point
    of the kernel tail; ``None`` picks the smallest horizon whose neglected
    alpha-mass is below ``tail_tol`` times the total.
    """

    kernel: str = "power"
    params: dict = field(default_factory=dict)
    alpha: float = 1.5
    causal_shift: float = 0.0
    delta: float = 1.0 / 64.0
    horizon: Optional[float] = None
    tail_tol: float = 1e-6
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kernel not in _FAMILIES:
            raise ParameterError(f"kernel family must be one of {_FAMILIES}, got {self.kernel!r}")
        a = float(self.alpha)
        if not (1.0 < a < 2.0):
            raise ParameterError(f"alpha must lie in (1, 2), got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "params", dict(self.params))
        if self.causal_shift > 0:
            raise ParameterError("causal_shift must be <= 0")
        if not (self.delta > 0 and np.isfinite(self.delta)):
            raise ParameterError("delta must be positive")
        if self.horizon is not None and not self.horizon > 0:
            raise ParameterError("horizon must be positive")
        if self.kernel == "power":
            p = float(self.params.get("p", 2.5))
            if p * a <= 1.0:
                raise ParameterError(f"power kernel needs p*alpha > 1 to lie in L^alpha (p={p})")
            self.params["p"] = p
        elif self.kernel == "indicator":
            lo = float(self.params.get("lo", 0.0))
            hi = float(self.params.get("hi", 1.0))
            if not hi > lo:
                raise ParameterError("indicator needs hi > lo")
            self.params.update(lo=lo, hi=hi)
        elif self.func is None:
            raise ParameterError("custom kernel needs a callable func")
        if self.support_start < self.causal_shift:
            raise ParameterError(
                f"kernel is non-causal: it does not vanish left of x0={self.causal_shift}"
            )
        if self.kernel == "custom":
            probe = self.causal_shift - np.linspace(1e-9, 10.0, 2001)
            if np.any(np.asarray(self.func(probe), dtype=float) != 0):
                raise ParameterError(
                    f"kernel is non-causal: a(x) != 0 for some x < x0={self.causal_shift}"
                )

    @property
    def support_start(self) -> float:
        if self.kernel == "power":
            return 1.0
        if self.kernel == "indicator":
            return self.params["lo"]
        return float(self.causal_shift)

    def a(self, x):
        x = np.asarray(x, dtype=float)
        if self.kernel == "power":
            out = np.zeros_like(x)
            m = x >= 1.0
            out[m] = x[m] ** (-self.params["p"])
            return out
        if self.kernel == "indicator":
            return ((x >= self.params["lo"]) & (x < self.params["hi"])).astype(float)
        return np.asarray(self.func(x), dtype=float)

    def alpha_mass(self) -> float:
        """``int |a|^alpha``; analytic for the registered families."""
        a = self.alpha
        if self.kernel == "power":
            return 1.0 / (self.params["p"] * a - 1.0)
        if self.kernel == "indicator":
            return self.params["hi"] - self.params["lo"]
        return self._numeric_mass(self._numeric_horizon())

    def tail_mass(self, t: float) -> float:
        """``int_t^inf |a|^alpha``."""
        a = self.alpha
        if self.kernel == "power":
            pa = self.params["p"] * a
            return (max(t, 1.0) ** (1.0 - pa)) / (pa - 1.0)
        if self.kernel == "indicator":
            return max(0.0, self.params["hi"] - max(t, self.params["lo"]))
        total = self._numeric_mass(self._numeric_horizon())
        return max(0.0, total - self._numeric_mass(t))

    def _numeric_mass(self, t: float) -> float:
        x0 = self.causal_shift
        n = max(16, int(math.ceil((t - x0) / self.delta)))
        x = x0 + (np.arange(n) + 0.5) * ((t - x0) / n)
        return float(np.sum(np.abs(self.a(x)) ** self.alpha) * ((t - x0) / n))

    def _numeric_horizon(self) -> float:
        t = max(1.0, -self.causal_shift + 1.0)
        prev = self._numeric_mass(t)
        for _ in range(40):
            t2 = 2.0 * t
            cur = self._numeric_mass(t2)
            if cur - prev <= self.tail_tol * max(cur, 1e-300):
                return t2
            t, prev = t2, cur
        raise ParameterError("could not find a truncation horizon; is a in L^alpha?")

    def effective_horizon(self) -> float:
        """Truncation point ``T`` actually used."""
        if self.horizon is not None:
            return float(self.horizon)
        if self.kernel == "power":
            pa = self.params["p"] * self.alpha
            t = self.tail_tol ** (1.0 / (1.0 - pa))
        elif self.kernel == "indicator":
            t = self.params["hi"]
        else:
            t = self._numeric_horizon()
        # round up to the grid so the kernel support ends on a cell edge
        return float(math.ceil(t / self.delta) * self.delta)

    def truncated_a(self, x):
        """Kernel with its tail beyond the horizon removed."""
        x = np.asarray(x, dtype=float)
        return np.where(x <= self.effective_horizon(), self.a(x), 0.0)


def ma_kernel_pair(spec: MovingAverageSpec, n: int) -> KernelPair:
    """Discretised pair ``(a(-x), a(n-x))`` for ``(xi_0, xi_n)``.

    Cells of width ``delta`` on a lattice containing the integers, midpoint
    values, masses ``delta``.  Each kernel is truncated at the horizon, so the
    pair depends on ``n`` only through the lag.
    """
    n = int(n)
    if n < 0:
        raise ParameterError("lag n must be >= 0")
    d = spec.delta
    t = spec.effective_horizon()
    i_lo = int(math.floor(-t / d + 1e-9))
    i_hi = int(math.ceil((n - spec.causal_shift) / d - 1e-9))
    x = (np.arange(i_lo, i_hi) + 0.5) * d
    f = spec.truncated_a(-x)
    g = spec.truncated_a(n - x)
    keep = (f != 0) | (g != 0)
    if not np.any(keep):
        raise ParameterError("kernel vanishes on the discretisation grid")
    return KernelPair.from_arrays(f[keep], g[keep], spec.alpha, np.full(int(keep.sum()), d))


@dataclass
class SummabilityReport:
    """Block-sum diagnostics for the moving-average CLT conditions.

    ``cond_sqrt_blocks`` is ``sum_m b_m^(1/2) < inf`` with
    ``b_m = int_{m-1}^m |a|^alpha``; ``cond_first_order`` is
    ``sum_m b_m^((alpha-1)/alpha) < inf``, which bounds the first-order
    dependence sums; ``cond_second_order`` is the exponent-1/2 sum that
    bounds the second-order ones.

    Each ``cond_*`` entry is a dict with keys ``holds`` (final verdict),
    ``analytic`` (exact verdict or ``None``), ``heuristic`` (numeric verdict),
    ``exponent``, ``partial_sums`` and ``tail_slope``.
    """

    cond_sqrt_blocks: dict
    cond_first_order: dict
    cond_second_order: dict
    block_integrals: np.ndarray
    refinement_change: float
    max_m: int

    @property
    def clt_conditions_hold(self) -> bool:
        """Sufficient check: first block condition plus the first-order one."""
        return bool(self.cond_sqrt_blocks["holds"] and self.cond_first_order["holds"])

    def to_dict(self) -> dict:
        return {
            "cond_sqrt_blocks": self.cond_sqrt_blocks,
            "cond_first_order": self.cond_first_order,
            "cond_second_order": self.cond_second_order,
            "block_integrals": self.block_integrals.tolist(),
            "refinement_change": self.refinement_change,
            "max_m": self.max_m,
            "clt_conditions_hold": self.clt_conditions_hold,
        }


def _block_integrals(spec: MovingAverageSpec, max_m: int, n_sub: int) -> np.ndarray:
    # shifted kernel vanishing on (-inf, 0); block m covers [m-1, m)
    x0 = spec.causal_shift
    x = (np.arange(max_m * n_sub) + 0.5) / n_sub
    vals = np.abs(spec.a(x + x0)) ** spec.alpha
    return vals.reshape(max_m, n_sub).sum(axis=1) / n_sub


def check_summability(spec: MovingAverageSpec, max_m: int = 256, n_sub: int = 256) -> SummabilityReport:
    """Block sums ``sum_m (int_{m-1}^m |a|^alpha)^e`` for ``e = 1/2, (alpha-1)/alpha``.

    The numeric verdict fits a power law ``b_m ~ m^s`` to the last half of
    the blocks and declares convergence when ``s*e < -1``; it is labelled
    heuristic.  Power and indicator kernels also get the exact verdict, which
    then decides ``holds``.
    """
    max_m = int(max_m)
    if max_m < 8:
        raise ParameterError("max_m must be >= 8")
    a = spec.alpha
    b = _block_integrals(spec, max_m, n_sub)
    b2 = _block_integrals(spec, max_m, 2 * n_sub)
    nz = b > 0
    change = float(np.max(np.abs(b2[nz] - b[nz]) / b[nz])) if np.any(nz) else 0.0

    m = np.arange(1, max_m + 1)
    tail = (m > max_m // 2) & nz
    if tail.sum() >= 3:
        slope = float(np.polyfit(np.log(m[tail]), np.log(b[tail]), 1)[0])
    elif not np.any(b[max_m // 2:] > 0):
        slope = -np.inf  # no mass in the tail blocks
    else:
        slope = float("nan")

    def entry(e: float, analytic: Optional[bool]) -> dict:
        heur = bool(slope * e < -1.0) if not np.isnan(slope) else False
        return {
            "exponent": e,
            "partial_sums": np.cumsum(b ** e).tolist(),
            "tail_slope": slope if np.isfinite(slope) else (None if np.isnan(slope) else "-inf"),
            "heuristic": heur,
            "analytic": analytic,
            "holds": analytic if analytic is not None else heur,
        }

    if spec.kernel == "power":
        p = spec.params["p"]
        an_half = p * a / 2.0 > 1.0
        an_first = p * (a - 1.0) > 1.0
    elif spec.kernel == "indicator":
        an_half = an_first = True
    else:
        an_half = an_first = None
    return SummabilityReport(
        cond_sqrt_blocks=entry(0.5, an_half),
        cond_first_order=entry((a - 1.0) / a, an_first),
        cond_second_order=entry(0.5, an_half),
        block_integrals=b,
        refinement_change=change,
        max_m=max_m,
    )
