"""Command-line interface: ``stable-wavelet <command> [options]``.

Every command resolves its effective configuration as built-in defaults,
then a named preset, then ``--config`` file, then explicit flags, echoes
it to stderr and embeds ``{version, command, seed, config}`` in every file
it writes.  Feeding such a file back through ``--config`` reruns the same
configuration.

Exit codes: 0 success, 1 a verdict failed, 2 usage or configuration error
(including missing input files and unmet hypotheses), 3 data or numerical
diagnostics error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .depmeas import KernelPair, MovingAverageSpec, check_summability, dependence_report, ma_kernel_pair
from .errors import (
    ConfigurationError,
    DataError,
    DiagnosticsError,
    HypothesisError,
    StableWaveletError,
)
from .estimators import _check_beta, estimate_H_log, estimate_H_power, ols_weights, sigma2_total, sigma_matrix
from .harness import (
    CltRunConfig,
    FunctionalSpec,
    McReport,
    bounds_preset,
    clt_preset,
    run_clt_mc,
    run_multiscale_clt,
    verify_cov_bound_b,
    verify_cov_bound_lag,
    verify_lemma52,
    verify_lemma53,
)
from .harness.presets import BOUNDS_PRESETS, CLT_PRESETS
from .harness.selfcheck import run_selfcheck
from .lfsm_wavelet import LfsmSpec, LfsmSynthesizer, SynthesisConfig, build_wavelet
from .lfsm_wavelet import wavelet_coeffs_direct, wavelet_coeffs_pyramidal
from .lfsm_wavelet.io import _jsonable, read_grid_csv, read_json, read_path_csv, sidecar_path
from .lfsm_wavelet.io import write_grid_csv, write_json, write_path_csv

__all__ = ["main", "build_parser", "resolve_config", "COMMANDS"]

log = logging.getLogger("stable_wavelet")

ENV_OUT = "STABLE_WAVELET_OUT"
DEFAULT_OUT = "stable_wavelet_out"

GLOBAL_DEFAULTS = {"seed": 0, "format": "json", "threads": None, "verbose": 0}

COMMANDS = {
    "synth": {"alpha": 1.6, "hurst": 0.7, "n": 16384, "delta": None, "tail_tol": 1e-6,
              "output": "path.csv"},
    "dwt": {"mode": "direct", "input": None, "alpha": 1.6, "hurst": 0.7, "n": 16384,
            "wavelet": "daubechies", "q": 2, "j_min": 1, "j_max": 5, "delta": None,
            "tail_tol": 1e-6, "output": "coeffs.csv"},
    "estimate": {"input": None, "method": "log", "beta": None, "alpha": None, "octaves": None,
                 "plugin": False, "lag_cap": None, "output": "estimate.json"},
    "depmeas": {"f": "1,0.4", "g": "0.4,1", "mu": None, "alpha": 1.5, "kernel": None, "p": 2.5,
                "ma_delta": 1.0 / 64.0, "lag": 8, "n_grid": 512, "output": "depmeas.json"},
    "clt": {"preset": None, "kernel": "power", "p": 2.5, "alpha": 1.5, "ma_delta": 1.0 / 64.0,
            "K": "log2abs", "N_values": "1024,2048,4096,8192,16384", "R": 200, "lag_cap": 256,
            "ad_level": 0.01, "var_rel_tol": 0.15, "series_rel_tol": 0.20,
            "output": "clt.json"},
    "bounds": {"preset": None, "check": "b", "f": "1,0.4", "g": "0.4,1", "mu": None,
               "alpha": 1.5, "beta": 0.5, "b_values": "1,2,4", "r_values": "0.1,1,10",
               "alphas": "1.1,1.5,1.9", "mc": None, "batches": None, "tolerance": 0.3,
               "kernel": "power", "p": 2.5, "ma_delta": 1.0 / 64.0, "K": "bounded-clip:1",
               "L": "bounded-clip:1", "lags": "1,2,4,8,16,32,64", "growth": 2.0,
               "output": "bounds.json"},
    "multiscale": {"alpha": 1.6, "hurst": 0.7, "wavelet": "daubechies", "q": 2,
                   "octaves": "1,2", "K": "log2abs", "n": 16384, "R": 300, "lag_cap": None,
                   "ad_level": 0.01, "n_se": 3.0, "output": "multiscale.json"},
    "selfcheck": {"lemma53_n": 100000, "output": "selfcheck.json"},
}

HELP = {
    "synth": "synthesise an LFSM path X(0..N)",
    "dwt": "wavelet coefficients (direct synthesis or pyramidal transform of a path)",
    "estimate": "estimate H from a coefficient grid",
    "depmeas": "dependence measures of a jointly SaS pair",
    "clt": "Monte-Carlo CLT check for a moving average",
    "bounds": "covariance-bound scaling checks and the auxiliary inequalities",
    "multiscale": "joint normality and covariance of per-octave statistics",
    "selfcheck": "deterministic property suites",
}


# ---------------------------------------------------------------------------
# parsing


def _add_globals(p: argparse.ArgumentParser):
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, help="base seed (default 0)")
    g.add_argument("--out-dir", dest="out_dir",
                   help=f"output directory (default ${ENV_OUT} or ./{DEFAULT_OUT})")
    g.add_argument("--format", choices=("json", "csv"),
                   help="report format; csv also writes per-replicate rows")
    g.add_argument("--config", dest="config_file", help="JSON config file (or an output file)")
    g.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    g.add_argument("-v", "--verbose", action="count", help="more logging (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stable-wavelet", description=__doc__.split("\n")[0],
                                     argument_default=argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def cmd(name):
        p = sub.add_parser(name, help=HELP[name], description=HELP[name],
                           argument_default=argparse.SUPPRESS)
        _add_globals(p)
        return p

    p = cmd("synth")
    p.add_argument("--alpha", type=float, help="stability index in (1, 2)")
    p.add_argument("--hurst", type=float, help="self-similarity H in (0, 1)")
    p.add_argument("--n", type=int, help="path length N; writes N+1 rows")
    p.add_argument("--delta", type=float, help="fine cell width (power of two)")
    p.add_argument("--tail-tol", dest="tail_tol", type=float)
    p.add_argument("--output", help="file name inside the output directory")

    p = cmd("dwt")
    p.add_argument("--mode", choices=("direct", "pyramidal"))
    p.add_argument("--input", help="path CSV (pyramidal mode)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--wavelet", choices=("haar", "daubechies"))
    p.add_argument("--q", type=int, help="vanishing moments")
    p.add_argument("--j-min", dest="j_min", type=int)
    p.add_argument("--j-max", dest="j_max", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--tail-tol", dest="tail_tol", type=float)
    p.add_argument("--output")

    p = cmd("estimate")
    p.add_argument("--input", help="coefficient CSV written by dwt")
    p.add_argument("--method", choices=("log", "power"))
    p.add_argument("--beta", type=float, help="moment order of the power method")
    p.add_argument("--alpha", type=float, help="stability index (default from metadata)")
    p.add_argument("--octaves", help="e.g. 1-5 or 1,2,3 (default all)")
    p.add_argument("--plugin", action="store_true", help="add the plug-in variance")
    p.add_argument("--lag-cap", dest="lag_cap", type=int)
    p.add_argument("--output")

    p = cmd("depmeas")
    p.add_argument("--f", help="kernel values of the first variable, comma separated")
    p.add_argument("--g", help="kernel values of the second variable")
    p.add_argument("--mu", help="atom masses (default 1)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--kernel", choices=("power", "indicator"),
                   help="use the pair (xi_0, xi_lag) of a moving average instead")
    p.add_argument("--p", type=float, help="power kernel exponent")
    p.add_argument("--ma-delta", dest="ma_delta", type=float)
    p.add_argument("--lag", type=int)
    p.add_argument("--n-grid", dest="n_grid", type=int)
    p.add_argument("--output")

    p = cmd("clt")
    p.add_argument("--preset", choices=CLT_PRESETS)
    p.add_argument("--kernel", choices=("power", "indicator"))
    p.add_argument("--p", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--ma-delta", dest="ma_delta", type=float)
    p.add_argument("--K", help="functional: log2abs, abspow:B, bounded-clip:C, indicator:LO,HI")
    p.add_argument("--N", dest="N_values", help="sample sizes, comma separated")
    p.add_argument("--R", type=int, help="replicates")
    p.add_argument("--lag-cap", dest="lag_cap", type=int)
    p.add_argument("--ad-level", dest="ad_level", type=float)
    p.add_argument("--var-rel-tol", dest="var_rel_tol", type=float)
    p.add_argument("--series-rel-tol", dest="series_rel_tol", type=float)
    p.add_argument("--output")

    p = cmd("bounds")
    p.add_argument("--preset", choices=BOUNDS_PRESETS)
    p.add_argument("--check", choices=("b", "lag", "lemma52", "lemma53"))
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--mu")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--b-values", dest="b_values")
    p.add_argument("--r-values", dest="r_values")
    p.add_argument("--alphas", help="alpha grid of the lemma53 check")
    p.add_argument("--mc", type=int, help="Monte-Carlo sample size")
    p.add_argument("--batches", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--kernel", choices=("power", "indicator"))
    p.add_argument("--p", type=float)
    p.add_argument("--ma-delta", dest="ma_delta", type=float)
    p.add_argument("--K")
    p.add_argument("--L")
    p.add_argument("--lags")
    p.add_argument("--growth", type=float)
    p.add_argument("--output")

    p = cmd("multiscale")
    p.add_argument("--alpha", type=float)
    p.add_argument("--hurst", type=float)
    p.add_argument("--wavelet", choices=("haar", "daubechies"))
    p.add_argument("--q", type=int)
    p.add_argument("--octaves")
    p.add_argument("--K")
    p.add_argument("--n", type=int)
    p.add_argument("--R", type=int)
    p.add_argument("--lag-cap", dest="lag_cap", type=int)
    p.add_argument("--ad-level", dest="ad_level", type=float)
    p.add_argument("--n-se", dest="n_se", type=float)
    p.add_argument("--output")

    p = cmd("selfcheck")
    p.add_argument("--lemma53-n", dest="lemma53_n", type=int)
    p.add_argument("--output")
    return parser


# ---------------------------------------------------------------------------
# configuration


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        obj = read_json(p)
    except DataError as exc:
        raise ConfigurationError(str(exc)) from exc
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path}: config must be a JSON object")
    # an output file of this tool carries its config under "config"
    if "version" in obj and isinstance(obj.get("config"), dict):
        obj = obj["config"]
    return dict(obj)


def _preset_values(command: str, name) -> dict:
    if name is None:
        return {}
    if command == "clt":
        clt_preset(name)  # validates the name
        return {}
    if command == "bounds":
        kw = bounds_preset(name)
        pair = kw["pair"]
        return {"check": "b", "f": list(pair.f.values), "g": list(pair.g.values),
                "mu": list(pair.mu), "alpha": pair.alpha, "beta": kw["beta"],
                "b_values": list(kw["b_values"]), "mc": kw["mc"]}
    return {}


def resolve_config(command: str, cli: dict, env: dict | None = None) -> dict:
    """Effective configuration: defaults < preset < config file < flags.

    The output directory is the ``--out-dir`` flag, else the environment
    variable, else the config file, else the default.
    """
    env = os.environ if env is None else env
    cli = dict(cli)
    cli.pop("command", None)
    file_cfg = _load_config_file(cli.pop("config_file")) if "config_file" in cli else {}
    file_cfg.pop("command", None)
    defaults = dict(GLOBAL_DEFAULTS, **COMMANDS[command])
    known = set(defaults) | {"out_dir"}
    unknown = sorted(set(file_cfg) - known)
    if unknown:
        raise ConfigurationError(f"unknown config keys for {command!r}: {unknown}")
    name = cli.get("preset", file_cfg.get("preset", defaults.get("preset")))
    cfg = dict(defaults)
    cfg.update(_preset_values(command, name))
    cfg.update(file_cfg)
    cfg.update(cli)
    if "out_dir" in cli:
        out = cli["out_dir"]
    elif env.get(ENV_OUT):
        out = env[ENV_OUT]
    else:
        out = file_cfg.get("out_dir", DEFAULT_OUT)
    cfg["out_dir"] = str(out)
    if cfg["threads"] is None:
        cfg["threads"] = os.cpu_count() or 1
    if int(cfg["threads"]) < 1:
        raise ConfigurationError("threads must be >= 1")
    return cfg


def _floats(v, what: str) -> list:
    if v is None:
        return None
    if isinstance(v, (int, float)):
        return [float(v)]
    if isinstance(v, (list, tuple)):
        items = v
    else:
        items = [s for s in str(v).replace(" ", "").split(",") if s]
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ConfigurationError(f"{what}: expected comma-separated numbers, got {v!r}") from exc


def _ints(v, what: str) -> list:
    if v is None:
        return None
    if isinstance(v, str) and "-" in v and "," not in v:
        lo, _, hi = v.partition("-")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ConfigurationError(f"{what}: bad range {v!r}") from exc
    vals = _floats(v, what)
    if any(x != int(x) for x in vals):
        raise ConfigurationError(f"{what}: expected integers, got {v!r}")
    return [int(x) for x in vals]


def _out_path(cfg: dict, name: str) -> Path:
    """``name`` inside the output directory; anything escaping it is refused."""
    root = Path(cfg["out_dir"]).resolve()
    rel = Path(name)
    if rel.is_absolute():
        raise ConfigurationError(f"output {name!r} must be a name inside the output directory")
    path = (root / rel).resolve()
    if root != path and root not in path.parents:
        raise ConfigurationError(f"output {name!r} escapes the output directory {root}")
    return path


def _input_path(v, what: str) -> Path:
    if v is None:
        raise ConfigurationError(f"{what} is required")
    p = Path(v)
    if not p.is_file():
        raise ConfigurationError(f"{what} not found: {v}")
    return p


def _envelope(command: str, cfg: dict, **payload) -> dict:
    return {"version": __version__, "command": command, "seed": cfg["seed"], "config": cfg,
            **payload}


def _write_report(command: str, cfg: dict, rep: McReport) -> list:
    path = _out_path(cfg, cfg["output"])
    write_json(path, _envelope(command, cfg, report=rep.to_dict()))
    written = [path]
    if cfg["format"] == "csv":
        # the JSON report of the same stem is the metadata of the CSV rows
        written.append(rep.write_csv(path.with_suffix(".csv")))
    for p in written:
        log.info("wrote %s", p)
    print(rep.banner())
    return written


def _lfsm(cfg: dict) -> LfsmSpec:
    return LfsmSpec(cfg["alpha"], cfg["hurst"])


def _ma(cfg: dict) -> MovingAverageSpec:
    kernel = cfg["kernel"]
    params = {"p": float(cfg["p"])} if kernel == "power" else {}
    return MovingAverageSpec(kernel, params, float(cfg["alpha"]), delta=float(cfg["ma_delta"]))


def _pair(cfg: dict) -> KernelPair:
    f, g = _floats(cfg["f"], "f"), _floats(cfg["g"], "g")
    mu = _floats(cfg["mu"], "mu")
    if len(f) != len(g) or (mu is not None and len(mu) != len(f)):
        raise ConfigurationError("f, g and mu must have the same number of atoms")
    return KernelPair.from_arrays(f, g, float(cfg["alpha"]), mu)


# ---------------------------------------------------------------------------
# commands (each returns the exit code)


def cmd_synth(cfg: dict) -> int:
    lfsm = _lfsm(cfg)
    sc = SynthesisConfig(N=int(cfg["n"]), delta=cfg["delta"], tail_tol=float(cfg["tail_tol"]),
                         seed=int(cfg["seed"]))
    path = _out_path(cfg, cfg["output"])
    synth = LfsmSynthesizer(lfsm, sc, None, path=True, coeffs=False)
    x = synth.draw()[0]
    write_path_csv(path, x, _envelope("synth", cfg, meta=synth.metadata()))
    print(f"wrote {path} ({x.size} rows)")
    return 0


def cmd_dwt(cfg: dict) -> int:
    w = build_wavelet(cfg["wavelet"], int(cfg["q"]))
    j_min, j_max = int(cfg["j_min"]), int(cfg["j_max"])
    if cfg["mode"] == "direct":
        sc = SynthesisConfig(N=int(cfg["n"]), j_min=j_min, j_max=j_max, delta=cfg["delta"],
                             tail_tol=float(cfg["tail_tol"]), seed=int(cfg["seed"]))
        grid = wavelet_coeffs_direct(_lfsm(cfg), w, sc)
    else:
        src = _input_path(cfg["input"], "input path file")
        x = read_path_csv(src)
        grid = wavelet_coeffs_pyramidal(x, w, j_max, j_min)
        side = sidecar_path(src)
        if side.is_file():
            meta = read_json(side).get("meta", {})
            for k in ("alpha", "H", "delta", "T", "seed"):
                if k in meta:
                    grid.meta.setdefault(k, meta[k])
        grid.meta["input"] = str(src)
    path = _out_path(cfg, cfg["output"])
    write_grid_csv(path, grid, {"version": __version__, "command": "dwt", "config": cfg,
                                "seed": cfg["seed"]})
    counts = ", ".join(f"N_{j}={n}" for j, n in grid.counts.items())
    print(f"wrote {path} ({counts})")
    return 0


def cmd_estimate(cfg: dict) -> int:
    method = cfg["method"]
    if method == "power":
        if cfg["beta"] is None:
            raise ConfigurationError("the power method needs --beta")
        if cfg["alpha"] is not None:
            _check_beta(cfg["beta"], cfg["alpha"])
    src = _input_path(cfg["input"], "input coefficient file")
    grid = read_grid_csv(src)
    octaves = _ints(cfg["octaves"], "octaves") or grid.octaves
    w = ols_weights(octaves)
    alpha = cfg["alpha"]
    if method == "log":
        res = estimate_H_log(grid, w, alpha)
    else:
        res = estimate_H_power(grid, w, cfg["beta"], alpha)
    if cfg["plugin"]:
        S, _ = sigma_matrix([grid], octaves, cfg["lag_cap"], method, res.beta,
                            alpha if alpha is not None else grid.meta.get("alpha"))
        res.sigma2_hat = sigma2_total(S, w)
    path = _out_path(cfg, cfg["output"])
    write_json(path, _envelope("estimate", cfg, result=res.to_dict(), input_meta=grid.meta))
    print(f"H_hat = {res.H_hat:.6f}  ({method}; octaves {octaves[0]}..{octaves[-1]})")
    for msg in res.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return 0


def cmd_depmeas(cfg: dict) -> int:
    extra = {}
    if cfg["kernel"] is not None:
        spec = _ma(cfg)
        pair = ma_kernel_pair(spec, int(cfg["lag"]))
        extra["summability"] = check_summability(spec).to_dict()
    else:
        pair = _pair(cfg)
    rep = dependence_report(pair, n_grid=int(cfg["n_grid"]))
    path = _out_path(cfg, cfg["output"])
    write_json(path, _envelope("depmeas", cfg, result=rep.to_dict(), **extra))
    print(json.dumps(_jsonable(rep.to_dict()), indent=2))
    return 0


def cmd_clt(cfg: dict) -> int:
    threads, seed = int(cfg["threads"]), int(cfg["seed"])
    if cfg["preset"] is not None:
        base = clt_preset(cfg["preset"], seed=seed, threads=threads)
    else:
        base = CltRunConfig(_ma(cfg), FunctionalSpec.parse(cfg["K"]),
                            N_values=tuple(_ints(cfg["N_values"], "N")), R=int(cfg["R"]),
                            seed=seed, lag_cap=int(cfg["lag_cap"]), threads=threads,
                            config_id="clt")
    run = CltRunConfig(base.ma, base.K, base.N_values, base.R, seed, base.lag_cap,
                       float(cfg["ad_level"]), float(cfg["var_rel_tol"]),
                       float(cfg["series_rel_tol"]), threads, base.config_id)
    rep = run_clt_mc(run)
    _write_report("clt", cfg, rep)
    return rep.exit_code


def cmd_bounds(cfg: dict) -> int:
    check, seed = cfg["check"], int(cfg["seed"])
    if check == "b":
        rep = verify_cov_bound_b(_pair(cfg), float(cfg["beta"]), _floats(cfg["b_values"], "b"),
                                 mc=int(cfg["mc"] or 10 ** 6), seed=seed,
                                 batches=int(cfg["batches"] or 100),
                                 tolerance=float(cfg["tolerance"]),
                                 config_id=cfg["preset"] or "cov_bound_b")
    elif check == "lag":
        rep = verify_cov_bound_lag(_ma(cfg), FunctionalSpec.parse(cfg["K"]),
                                   FunctionalSpec.parse(cfg["L"]), _ints(cfg["lags"], "lags"),
                                   mc=int(cfg["mc"] or 2 ** 20), seed=seed,
                                   batches=int(cfg["batches"] or 64),
                                   growth=float(cfg["growth"]))
    elif check == "lemma52":
        rep = verify_lemma52(float(cfg["alpha"]), float(cfg["beta"]),
                             _floats(cfg["b_values"], "b"), _floats(cfg["r_values"], "r"))
    else:
        rep = verify_lemma53(int(cfg["mc"] or 10 ** 6), _floats(cfg["alphas"], "alphas"),
                             seed=seed)
    _write_report("bounds", cfg, rep)
    return rep.exit_code


def cmd_multiscale(cfg: dict) -> int:
    w = build_wavelet(cfg["wavelet"], int(cfg["q"]))
    rep = run_multiscale_clt(_lfsm(cfg), w, _ints(cfg["octaves"], "octaves"),
                             FunctionalSpec.parse(cfg["K"]), N=int(cfg["n"]), R=int(cfg["R"]),
                             seed=int(cfg["seed"]), lag_cap=cfg["lag_cap"],
                             threads=int(cfg["threads"]), ad_level=float(cfg["ad_level"]),
                             n_se=float(cfg["n_se"]))
    _write_report("multiscale", cfg, rep)
    return rep.exit_code


def cmd_selfcheck(cfg: dict) -> int:
    rep = run_selfcheck(int(cfg["seed"]), int(cfg["lemma53_n"]))
    _write_report("selfcheck", cfg, rep)
    return rep.exit_code


_RUNNERS = {
    "synth": cmd_synth,
    "dwt": cmd_dwt,
    "estimate": cmd_estimate,
    "depmeas": cmd_depmeas,
    "clt": cmd_clt,
    "bounds": cmd_bounds,
    "multiscale": cmd_multiscale,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cli = vars(ns)
    command = cli["command"]
    try:
        cfg = resolve_config(command, cli)
        logging.basicConfig(level=logging.WARNING - 10 * min(int(cfg["verbose"] or 0), 2),
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        echo = {"version": __version__, "command": command, "seed": cfg["seed"], "config": cfg}
        print("effective config: " + json.dumps(_jsonable(echo), sort_keys=True), file=sys.stderr)
        return _RUNNERS[command](cfg)
    except (DataError, DiagnosticsError) as exc:
        print(f"stable-wavelet {command}: data error: {exc}", file=sys.stderr)
        return 3
    except HypothesisError as exc:
        print(f"stable-wavelet {command}: hypotheses not met: {exc}", file=sys.stderr)
        return 2
    except (StableWaveletError, ValueError) as exc:
        print(f"stable-wavelet {command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
