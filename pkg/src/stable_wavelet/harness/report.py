"""Monte-Carlo report container, verdicts and scaling-slope fits."""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .. import __version__
from ..errors import DiagnosticsError
from ..lfsm_wavelet.io import _jsonable, fmt_real

__all__ = ["Verdict", "McReport", "SlopeFit", "fit_loglog", "upper_bound_verdict"]

LONG_COLUMNS = ("config_id", "replicate", "N", "statistic", "value")


@dataclass
class Verdict:
    """One pass/fail decision together with the rule that produced it.

    ``status`` is ``"pass"``, ``"fail"``, ``"below_noise_floor"`` (nothing
    measurable; counted as a pass) or ``"skipped"``.
    """

    name: str
    status: str
    value: Optional[float]
    target: Optional[float]
    tolerance: Optional[float]
    rule: str
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "below_noise_floor", "skipped")

    @classmethod
    def check(cls, name: str, ok: bool, value, target, tolerance, rule: str, **detail) -> "Verdict":
        return cls(name, "pass" if ok else "fail",
                   None if value is None else float(value),
                   None if target is None else float(target),
                   None if tolerance is None else float(tolerance), rule, detail)


@dataclass
class McReport:
    """Summary of one verification run.

    ``records`` holds long-form per-replicate rows
    ``(config_id, replicate, N, statistic, value)``.  ``runtime`` is the
    only field that is not reproducible from ``(config, seed)``.
    """

    kind: str
    config_id: str
    config: dict
    seed: Optional[int]
    summaries: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    hypothesis_unmet: list = field(default_factory=list)
    records: list = field(default_factory=list)
    runtime: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def exit_code(self) -> int:
        """0 all verdicts pass, 1 some verdict fails, 2 hypotheses unmet."""
        if self.hypothesis_unmet:
            return 2
        return 0 if self.passed else 1

    def add_records(self, replicate_values, N: int, statistic: str):
        for r, v in enumerate(np.asarray(replicate_values, dtype=float).ravel()):
            self.records.append((self.config_id, r, int(N), statistic, float(v)))

    def to_dict(self) -> dict:
        return _jsonable({
            "kind": self.kind,
            "config_id": self.config_id,
            "version": self.version,
            "seed": self.seed,
            "config": self.config,
            "summaries": self.summaries,
            "verdicts": [dict(asdict(v), passed=v.passed) for v in self.verdicts],
            "hypothesis_unmet": self.hypothesis_unmet,
            "passed": self.passed,
            "runtime": self.runtime,
        })

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        kw.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kw)

    def write_json(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")
        return path

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(LONG_COLUMNS)
            for cid, r, n, stat, val in self.records:
                wr.writerow([cid, r, n, stat, fmt_real(val)])
        return path

    def banner(self) -> str:
        lines = [f"{self.kind} [{self.config_id}] seed={self.seed} runtime={self.runtime:.1f}s"]
        if self.hypothesis_unmet:
            lines.append("HYPOTHESIS UNMET: " + "; ".join(self.hypothesis_unmet))
        for v in self.verdicts:
            val = "n/a" if v.value is None else f"{v.value:.6g}"
            lines.append(f"  {v.status.upper():>17}  {v.name}: {val}  ({v.rule})")
        return "\n".join(lines)


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    se: float
    n_points: int

    def to_dict(self) -> dict:
        return asdict(self)


def fit_loglog(x: Sequence[float], y: Sequence[float], se_log_y: Optional[Sequence[float]] = None,
               base: float = np.e) -> SlopeFit:
    """Weighted least squares of ``log y`` on ``log x``.

    With ``se_log_y`` the points are weighted by ``1/se^2`` and the slope
    standard error is the WLS one; otherwise it is the OLS residual-based
    standard error (``nan`` for two points).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise DiagnosticsError("a slope fit needs at least two points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DiagnosticsError("log-log fit needs positive values")
    lx = np.log(x) / np.log(base)
    ly = np.log(y) / np.log(base)
    if se_log_y is None:
        A = np.column_stack([lx, np.ones_like(lx)])
        coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
        dof = lx.size - 2
        if dof > 0:
            resid = ly - A @ coef
            s2 = float(resid @ resid) / dof
            se = float(np.sqrt(s2 / np.sum((lx - lx.mean()) ** 2)))
        else:
            se = float("nan")
        return SlopeFit(float(coef[0]), float(coef[1]), se, int(lx.size))
    s = np.asarray(se_log_y, dtype=float) / np.log(base)
    wts = 1.0 / s ** 2
    xm = np.sum(wts * lx) / wts.sum()
    ym = np.sum(wts * ly) / wts.sum()
    sxx = np.sum(wts * (lx - xm) ** 2)
    slope = float(np.sum(wts * (lx - xm) * (ly - ym)) / sxx)
    return SlopeFit(slope, float(ym - slope * xm), float(np.sqrt(1.0 / sxx)), int(lx.size))


def upper_bound_verdict(name: str, fit: SlopeFit, target: float, tolerance: float) -> Verdict:
    """Pass when ``slope - 2 SE <= target + tolerance``."""
    se = fit.se if np.isfinite(fit.se) else 0.0
    lhs = fit.slope - 2.0 * se
    return Verdict.check(name, lhs <= target + tolerance, fit.slope, target, tolerance,
                         "slope - 2*SE <= target + tolerance", slope_se=fit.se,
                         slope_minus_2se=lhs)
