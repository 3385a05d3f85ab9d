"""Deterministic property suites run by the ``selfcheck`` command.

Each check draws its random inputs from a fixed stream, so the report is
reproducible from the seed.
"""
from __future__ import annotations

import time

import numpy as np

from ..depmeas import (
    BOUNDS,
    KernelPair,
    codifference,
    du_measure,
    dudv_measure,
    i_measure,
    lemma31_ratio,
    m1,
    m1_star,
    m2,
    representation_transform,
    u_measure,
)
from ..estimators import ols_weights
from ..lfsm_wavelet.wavelets import build_wavelet
from ..stable_core import RngStream
from .lemmas import lemma52_integral, verify_lemma53
from .report import McReport, Verdict

__all__ = [
    "random_pair",
    "safe_point",
    "richardson_du",
    "richardson_dudv",
    "check_lemma31",
    "check_derivatives",
    "check_invariance",
    "run_selfcheck",
]


def random_pair(rng: np.random.Generator, n_atoms: int, alpha: float) -> KernelPair:
    """Pair with standard normal values and masses uniform on ``(0.1, 2)``."""
    f = rng.standard_normal(n_atoms)
    g = rng.standard_normal(n_atoms)
    mu = rng.uniform(0.1, 2.0, n_atoms)
    return KernelPair.from_arrays(f, g, alpha, mu)


def safe_point(p: KernelPair, rng: np.random.Generator, margin: float = 0.05, box: float = 2.0):
    """Random ``(u, v)`` away from every kink of ``U``.

    The distance is relative: ``|u f + v g| > margin (|u f| + |v g|)`` per
    atom and ``|u|, |v| > margin box``, so tiny atom values cannot stall it.
    """
    f, g = p.f.values, p.g.values
    while True:
        u, v = rng.uniform(-box, box, 2)
        if min(abs(u), abs(v)) <= margin * box:
            continue
        s = np.abs(u * f) + np.abs(v * g)
        if np.all(np.abs(u * f + v * g) > margin * s):
            return float(u), float(v)


def richardson_du(p: KernelPair, u: float, v: float, h: float = 1e-3) -> float:
    def d(s):
        return (u_measure(p, u + s, v) - u_measure(p, u - s, v)) / (2 * s)

    return (4.0 * d(h / 2) - d(h)) / 3.0


def richardson_dudv(p: KernelPair, u: float, v: float, h: float = 1e-3) -> float:
    def d(s):
        return (u_measure(p, u + s, v + s) - u_measure(p, u + s, v - s)
                - u_measure(p, u - s, v + s) + u_measure(p, u - s, v - s)) / (4 * s * s)

    return (4.0 * d(h / 2) - d(h)) / 3.0


def check_lemma31(seed: int = 0, n_pairs: int = 20, n_atoms: int = 4, n_grid: int = 100,
                  alphas=(1.2, 1.5, 1.8)) -> list:
    rng = RngStream(seed, 31).generator()
    ax = np.linspace(-5.0, 5.0, n_grid)
    uu, vv = np.meshgrid(ax, ax)
    grid = np.column_stack([uu.ravel(), vv.ravel()])
    worst = {b: 0.0 for b in BOUNDS}
    for i in range(n_pairs):
        p = random_pair(rng, n_atoms, alphas[i % len(alphas)])
        for b in BOUNDS:
            worst[b] = max(worst[b], lemma31_ratio(p, grid, b))
    return [Verdict.check(f"lemma31_{b}", worst[b] <= 1.0, worst[b], 1.0, None,
                          "max |U| / bound <= 1 over pairs and grid") for b in BOUNDS]


def check_derivatives(seed: int = 0, n_points: int = 100, rtol: float = 1e-5) -> list:
    rng = RngStream(seed, 32).generator()
    e1 = e2 = 0.0
    for i in range(n_points):
        p = random_pair(rng, 4, (1.2, 1.5, 1.8)[i % 3])
        u, v = safe_point(p, rng)
        a, b = du_measure(p, u, v), richardson_du(p, u, v)
        e1 = max(e1, abs(a - b) / max(abs(b), 1e-300))
        a, b = dudv_measure(p, u, v), richardson_dudv(p, u, v)
        e2 = max(e2, abs(a - b) / max(abs(b), 1e-300))
    return [
        Verdict.check("du_measure", e1 <= rtol, e1, 0.0, rtol, "relative error vs Richardson FD"),
        Verdict.check("dudv_measure", e2 <= rtol, e2, 0.0, rtol, "relative error vs Richardson FD"),
    ]


def _quantities(p: KernelPair, pts) -> np.ndarray:
    vals = [m1_star(p), m1_star(p.swapped()), m1(p), m2(p), codifference(p)]
    vals += [float(u_measure(p, u, v)) for u, v in pts]
    vals += [float(i_measure(p, u, v)) for u, v in pts]
    return np.array(vals)


def check_invariance(seed: int = 0, n_transforms: int = 50, rtol: float = 1e-10) -> list:
    rng = RngStream(seed, 33).generator()
    pts = rng.uniform(-2.0, 2.0, (3, 2))
    worst = 0.0
    for i in range(n_transforms):
        p = random_pair(rng, 5, (1.2, 1.5, 1.8)[i % 3])
        ref = _quantities(p, pts)
        h = rng.choice([-1.0, 1.0], 5) * 10.0 ** rng.uniform(-1.0, 1.0, 5)
        q = representation_transform(p, h, rng.permutation(5))
        worst = max(worst, float(np.max(np.abs(_quantities(q, pts) - ref) / np.abs(ref))))
    return [Verdict.check("representation_invariance", worst <= rtol, worst, 0.0, rtol,
                          "max relative change of m1*, m1, m2, codifference, U, I")]


def run_selfcheck(seed: int = 0, lemma53_n: int = 10 ** 5) -> McReport:
    """All deterministic suites in one report."""
    t0 = time.perf_counter()
    rep = McReport("selfcheck", "selfcheck", {"seed": seed, "lemma53_n": lemma53_n}, seed)
    rep.verdicts += check_lemma31(seed)
    rep.verdicts += check_derivatives(seed)
    rep.verdicts += check_invariance(seed)
    l53 = verify_lemma53(lemma53_n, seed=seed)
    rep.verdicts += l53.verdicts
    for fam, q in (("haar", 1), ("daubechies", 2), ("daubechies", 3), ("daubechies", 4)):
        w = build_wavelet(fam, q, 10)
        chk = w.check_moments()
        rep.verdicts.append(Verdict.check(f"moments_{w.name}", chk["ok"], max(chk["relative"][:q]),
                                          0.0, 1e-6, "vanishing moments 0..Q-1, moment Q nonzero"))
    worst = 0.0
    for octs in ((1, 2), (1, 2, 3), (1, 2, 3, 4, 5), (2, 3, 4, 5, 6, 7)):
        w = ols_weights(octs)
        j = np.asarray(octs, dtype=float)
        worst = max(worst, abs(w.w.sum()), abs(w.w @ j - 1.0))
    rep.verdicts.append(Verdict.check("weight_identities", worst <= 1e-12, worst, 0.0, 1e-12,
                                      "sum w = 0 and sum j w = 1"))
    a = 1.5
    i1 = lemma52_integral(a, 0.5, 1.0, 4.0)["value"]
    i2 = lemma52_integral(a, 0.5, 1.0, 0.25)["value"]
    rel = abs(i1 - 4.0 ** (a - 2.0) * i2) / i1
    rep.verdicts.append(Verdict.check("lemma52_swap_symmetry", rel <= 1e-6, rel, 0.0, 1e-6,
                                      "I0(r) = r^(alpha-2) I0(1/r)"))
    rep.runtime = time.perf_counter() - t0
    return rep
