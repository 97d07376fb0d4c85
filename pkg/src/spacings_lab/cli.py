"""Config-driven experiment runner.

    spacings-lab run --config cfg.json [--seed S] [--threads T] [--out DIR]
    spacings-lab oracle --law TAG --draws N [--seed S] [--out FILE]

Seed precedence: ``--seed`` flag, then the config's ``seed``, then the
``SPACINGS_LAB_SEED`` environment variable, then 0.  Output directory
precedence: ``--out``, then the config's ``output``, then the current
directory.  A run writes ``report.json`` and, with ``"format": "csv"``, the
raw replicates as ``replicates.csv`` (or count histograms for ``counts``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from . import __version__
from .counts import CountLimitLaw, count_limit_pmf, duality_check, histogram, histogram_csv, window_counts
from .distributions import DistributionSpec, central_regime, from_config, norming_constants
from .errors import SpacingsError
from .inference import coverage_experiment
from .limit_laws import LimitLaw, draw, limit_cdf
from .rng import default_threads
from .sampling import METHODS, WindowSample, normalize, sample_windows, spacings
from .stats_tests import TestReport, discrete_gof, independence_check, ks_one_sample, ks_two_sample

EXPERIMENTS = (
    "central-spacings",
    "central-joint",
    "intermediate-spacings",
    "extreme-window",
    "counts",
    "inference-coverage",
    "oracle-dump",
)
SEED_ENV = "SPACINGS_LAB_SEED"
CSV_SCHEMA = "#schema=1"
ORACLE_STREAM = 1
# largest W-vector drawn as an oracle for extreme windows
_MAX_ORACLE_DIM = 256


class ConfigError(SpacingsError, ValueError):
    """Invalid experiment configuration; the message names the field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config field {field!r}: {message}")
        self.field = field


# -- config --------------------------------------------------------------------

_REQUIRED = {
    "central-spacings": ("dist", "n", "p", "r", "s", "n_replicates"),
    "central-joint": ("dist", "n", "p", "r", "s", "n_replicates"),
    "intermediate-spacings": ("dist", "n", "r", "s", "n_replicates"),
    "extreme-window": ("dist", "n", "k", "s", "n_replicates"),
    "counts": ("dist", "n", "regime", "d_lambda", "n_replicates"),
    "inference-coverage": ("dist", "n", "p", "r", "s", "level", "n_replicates"),
    "oracle-dump": ("law", "n_replicates"),
}


def _int_field(cfg: Mapping[str, Any], name: str, minimum: int) -> int:
    v = cfg[name]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or float(v) != int(v):
        raise ConfigError(name, "must be an integer")
    if int(v) < minimum:
        raise ConfigError(name, f"must be >= {minimum}")
    return int(v)


def _prob_field(cfg: Mapping[str, Any], name: str) -> float:
    v = cfg[name]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 < float(v) < 1.0:
        raise ConfigError(name, "must be a number in (0, 1)")
    return float(v)


def parse_seed(value, field: str = "seed") -> int:
    try:
        seed = int(str(value), 0) if isinstance(value, str) else int(value)
    except (TypeError, ValueError):
        raise ConfigError(field, "must be a non-negative 64-bit integer") from None
    if isinstance(value, bool) or not 0 <= seed < 2**64:
        raise ConfigError(field, "must be a non-negative 64-bit integer")
    return seed


def resolve_seed(flag: int | None, cfg: Mapping[str, Any], env: Mapping[str, str] | None = None) -> int:
    env = os.environ if env is None else env
    if flag is not None:
        return parse_seed(flag, "--seed")
    if "seed" in cfg:
        return parse_seed(cfg["seed"])
    if env.get(SEED_ENV):
        return parse_seed(env[SEED_ENV], SEED_ENV)
    return 0


def validate_config(cfg: Mapping[str, Any]) -> dict[str, Any]:
    """Check required fields and types; return a normalized copy (``k`` filled in)."""
    if not isinstance(cfg, Mapping):
        raise ConfigError("experiment", "config must be a JSON object")
    if "experiment" not in cfg:
        raise ConfigError("experiment", "missing required field")
    exp = cfg["experiment"]
    if exp not in EXPERIMENTS:
        raise ConfigError("experiment", f"must be one of {', '.join(EXPERIMENTS)}")
    for name in _REQUIRED[exp]:
        if name not in cfg:
            raise ConfigError(name, f"missing required field for {exp}")
    out = dict(cfg)
    out["n_replicates"] = _int_field(cfg, "n_replicates", 1)
    fmt = out.setdefault("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError("format", "must be 'json' or 'csv'")
    if exp == "oracle-dump":
        try:
            LimitLaw.parse(str(cfg["law"]))
        except SpacingsError as exc:
            raise ConfigError("law", str(exc)) from None
        return out

    try:
        out["dist"] = from_config(cfg["dist"]).to_config() if not isinstance(cfg["dist"], str) \
            else from_config({"family": cfg["dist"]}).to_config()
    except (SpacingsError, TypeError, OSError) as exc:
        raise ConfigError("dist", str(exc)) from None
    if cfg["dist"] != out["dist"] and isinstance(cfg["dist"], Mapping) \
            and cfg["dist"].get("family") == "user-defined-via-quantile":
        out["dist"] = dict(cfg["dist"])
    n = out["n"] = _int_field(cfg, "n", 1)
    if "p" in cfg:
        out["p"] = _prob_field(cfg, "p")
    if "k" in cfg:
        out["k"] = _int_field(cfg, "k", 1)
    elif "p" in cfg:
        out["k"] = int(round(n * out["p"]))
    else:
        raise ConfigError("k", f"missing required field for {exp} (give k or p)")
    if not 1 <= out["k"] <= n:
        raise ConfigError("k", "must satisfy 1 <= k <= n")
    method = out.setdefault("method", "beta-pivot")
    if method not in METHODS:
        raise ConfigError("method", f"must be one of {', '.join(METHODS)}")

    if exp == "counts":
        regime = out["regime"]
        if regime not in ("central", "intermediate", "extreme"):
            raise ConfigError("regime", "must be central, intermediate or extreme")
        lam = cfg["d_lambda"]
        if isinstance(lam, bool) or not isinstance(lam, (int, float)) or not lam > 0:
            raise ConfigError("d_lambda", "must be a positive number")
        out["d_lambda"] = float(lam)
        out.setdefault("s", 30)
        out.setdefault("r", out["n"] - out["k"] if regime == "extreme" else 30)
    if exp == "extreme-window":
        out.setdefault("r", n - out["k"])
        out["per_rank"] = bool(out.get("per_rank", False))
    r = out["r"] = _int_field(out, "r", 0)
    s = out["s"] = _int_field(out, "s", 0)
    if out["k"] - s < 1:
        raise ConfigError("s", "window runs below X_{1:n} (need k - s >= 1)")
    if out["k"] + r > n:
        raise ConfigError("r", "window runs above X_{n:n} (need k + r <= n)")
    if exp == "inference-coverage":
        out["level"] = _prob_field(cfg, "level")
        if r + s < 2:
            raise ConfigError("r", "inference needs r + s >= 2")
        out["mc_size"] = _int_field(out, "mc_size", 100_000) if "mc_size" in out else 1_000_000
    if exp.startswith("central") and "p" not in out:
        raise ConfigError("p", "missing required field")
    return out


# -- helpers -------------------------------------------------------------------

def _exp_cdf(x):
    return -np.expm1(-np.maximum(np.asarray(x, dtype=float), 0.0))


def _std_normal_cdf(x):
    return limit_cdf(LimitLaw("std-normal"), x)


def _labels(r: int, s: int) -> list[str]:
    """Labels of ``NormalizedWindow.all_spacings`` columns (window order)."""
    return [f"left_{j}" for j in range(s, 0, -1)] + [f"right_{j}" for j in range(1, r + 1)]


def _pairwise(cols: Mapping[str, np.ndarray]) -> list[tuple[str, TestReport]]:
    out = []
    for a, b in combinations(cols, 2):
        out.append((f"independence {a} vs {b}", _safe_independence(cols[a], cols[b])))
    return out


def _safe_independence(x, y) -> TestReport:
    try:
        return independence_check(x, y)
    except SpacingsError as exc:
        return TestReport("independence_check", math.nan, math.nan, int(np.size(x)), False,
                          {"error": str(exc)})


# -- experiments ----------------------------------------------------------------

class _Result:
    def __init__(self):
        self.tests: list[tuple[str, TestReport]] = []
        self.extra: dict[str, Any] = {}
        self.window: WindowSample | None = None
        self.regime: str | None = None
        self.files: dict[str, str] = {}


def _windows(cfg, dist, threads):
    return sample_windows(dist, cfg["n"], cfg["k"], cfg["r"], cfg["s"], cfg["method"],
                          cfg["n_replicates"], seed=cfg["seed"], threads=threads)


def _central(cfg, dist, threads, joint: bool) -> _Result:
    res = _Result()
    cr = central_regime(dist, cfg["p"])
    nc = norming_constants(dist, cfg["n"], cfg["k"], "central", cr)
    w = _windows(cfg, dist, threads)
    nw = normalize(spacings(w), nc, "central", cr)
    cols = dict(zip(_labels(cfg["r"], cfg["s"]), nw.all_spacings().T))
    if cr.theta == 1.0:
        sp_cdf, sp_name = _exp_cdf, "Exp(1)"
        c_cdf, c_name = _std_normal_cdf, "N(0,1)"
    else:
        law = LimitLaw("powered-exp", theta=cr.theta)
        sp_cdf, sp_name = (lambda x: limit_cdf(law, x)), f"powered-exp(theta={cr.theta:g})"
        c_cdf, c_name = (lambda x: limit_cdf(LimitLaw("half-normal"), x)), "half-normal"
    for name, v in cols.items():
        res.tests.append((f"ks {name} vs {sp_name}", ks_one_sample(v, sp_cdf)))
    res.tests += _pairwise(cols)
    if joint:
        res.tests.append((f"ks center vs {c_name}", ks_one_sample(nw.center, c_cdf)))
        for name, v in cols.items():
            res.tests.append((f"independence center vs {name}", _safe_independence(nw.center, v)))
    res.extra["constants"] = {"x_p": cr.x_p, "f_xp": cr.f_xp, "theta": cr.theta, "M": cr.M,
                              "b_n": nc.b_n, "c_n": nc.c_n, "t_n": nc.t_n}
    res.window, res.regime = w, "central"
    return res


def _intermediate(cfg, dist, threads) -> _Result:
    res = _Result()
    nc = norming_constants(dist, cfg["n"], cfg["k"], "intermediate",
                           intermediate_scale=cfg.get("intermediate_scale", "density"))
    w = _windows(cfg, dist, threads)
    nw = normalize(spacings(w), nc, "intermediate")
    cols = dict(zip(_labels(cfg["r"], cfg["s"]), nw.all_spacings().T))
    for name, v in cols.items():
        res.tests.append((f"ks {name} vs Exp(1)", ks_one_sample(v, _exp_cdf)))
    res.tests.append(("ks center vs N(0,1)", ks_one_sample(nw.center, _std_normal_cdf)))
    res.tests += _pairwise({"center": nw.center, **cols})
    res.extra["constants"] = {"a_n": nc.a_n, "b_n": nc.b_n, "c_n": nc.c_n}
    res.window, res.regime = w, "intermediate"
    return res


def _extreme(cfg, dist, threads) -> _Result:
    res = _Result()
    n, k, r, s = cfg["n"], cfg["k"], cfg["r"], cfg["s"]
    nc = norming_constants(dist, n, k, "extreme")
    w = _windows(cfg, dist, threads)
    sv = spacings(w)
    nw = normalize(sv, nc, "extreme")
    labels = _labels(r, s)
    cols = dict(zip(labels, nw.all_spacings().T))
    dom = dist.domain
    # W-vector oracle: X_{m:n} corresponds to W_{n-m+1}
    dim = n - (k - s) + 1
    if dim <= _MAX_ORACLE_DIM:
        wl = LimitLaw(f"{dom.domain}-W-vector", alpha=dom.alpha if dom.domain != "gumbel" else None, j=dim)
        wv = draw(wl, cfg["n_replicates"], seed=cfg["seed"], stream_id=ORACLE_STREAM)
        # window column c sits at position k-s+c, i.e. W index dim-c
        oracle_vals = wv[:, ::-1]
        res.tests.append((f"ks2 center vs W_{n - k + 1}",
                          ks_two_sample(nw.center, oracle_vals[:, s])))
        o_sp = np.diff(oracle_vals, axis=-1)
        for c, name in enumerate(labels):
            res.tests.append((f"ks2 {name} vs W-vector spacing", ks_two_sample(cols[name], o_sp[:, c])))
    if cfg["per_rank"]:
        pr = normalize(sv, nc, "extreme", per_rank=True)
        for name, v in zip(labels, pr.all_spacings().T):
            res.tests.append((f"ks per-rank {name} vs Exp(1)", ks_one_sample(v, _exp_cdf)))
    for name, v in cols.items():
        res.tests.append((f"independence center vs {name}", _safe_independence(nw.center, v)))
    res.tests += _pairwise(cols)
    res.extra["constants"] = {"a_n": nc.a_n, "b_n": nc.b_n, "domain": dom.domain, "alpha": dom.alpha}
    res.window, res.regime = w, "extreme"
    return res


def _count_laws(dist: DistributionSpec, regime: str, lam: float, top: int):
    if regime in ("central", "intermediate"):
        law = CountLimitLaw("poisson", lam)
        return law, law
    dom = dist.domain
    if dom.domain == "gumbel":
        return CountLimitLaw("neg-binomial", lam, k=top), CountLimitLaw("binomial", lam, k=top)
    if dom.domain == "weibull" and dom.alpha == 1.0:
        return CountLimitLaw("poisson", lam), CountLimitLaw("censored-poisson", lam, k=top)
    if dom.domain == "frechet":
        # K- has no proper limit here; only K+ is tested
        return None, CountLimitLaw("frechet-mixed", lam, k=top, alpha=dom.alpha)
    return (CountLimitLaw("extreme-minus", lam, k=top, alpha=dom.alpha, domain=dom.domain),
            CountLimitLaw("extreme-plus", lam, k=top, alpha=dom.alpha, domain=dom.domain))


def _counts(cfg, dist, threads) -> _Result:
    res = _Result()
    n, k, regime, lam = cfg["n"], cfg["k"], cfg["regime"], cfg["d_lambda"]
    if regime == "central":
        nc = norming_constants(dist, n, k, "central", central_regime(dist, cfg.get("p", k / n)))
        scale = nc.c_n
    elif regime == "intermediate":
        scale = norming_constants(dist, n, k, "intermediate").c_n
    else:
        scale = norming_constants(dist, n, k, "extreme").b_n
    d = lam * scale
    w = _windows(cfg, dist, threads)
    wc = window_counts(w, d)
    law_minus, law_plus = _count_laws(dist, regime, lam, n - k)
    for side, vals, law in (("k_minus", wc.k_minus, law_minus), ("k_plus", wc.k_plus, law_plus)):
        if law is None:
            continue
        res.tests.append((f"gof {side} vs {law.kind}",
                          discrete_gof(histogram(vals), lambda j, law=law: count_limit_pmf(law, j),
                                       law.support_max)))
    res.tests.append(("independence k_minus vs k_plus", _safe_independence(wc.k_minus, wc.k_plus)))
    dual = True
    for i in range(1, min(cfg["s"], 5) + 1):
        dual &= duality_check(w, None, d, i=i)
    for j in range(1, min(cfg["r"], 5) + 1):
        dual &= duality_check(w, None, d, j=j)
    h_minus, h_plus = histogram(wc.k_minus), histogram(wc.k_plus)
    res.extra.update({
        "d": d,
        "duality_holds": bool(dual),
        "saturated_replicates": int(np.sum(wc.saturated_minus | wc.saturated_plus)),
        "histogram_k_minus": {str(v): f for v, f in h_minus.items()},
        "histogram_k_plus": {str(v): f for v, f in h_plus.items()},
    })
    res.files["counts_k_minus.csv"] = histogram_csv(h_minus)
    res.files["counts_k_plus.csv"] = histogram_csv(h_plus)
    return res


def _coverage(cfg, dist, threads) -> _Result:
    res = _Result()
    rep = coverage_experiment({
        "parent": cfg["dist"], "n": cfg["n"], "p": cfg.get("p", cfg["k"] / cfg["n"]),
        "r": cfg["r"], "s": cfg["s"], "level": cfg["level"], "n_rep": cfg["n_replicates"],
        "seed": cfg["seed"], "mc_size": cfg["mc_size"], "method": cfg["method"],
    }, threads=threads)
    level, n_rep = cfg["level"], cfg["n_replicates"]
    se0 = math.sqrt(level * (1.0 - level) / n_rep)
    z = (rep["coverage"] - level) / se0
    p = float(math.erfc(abs(z) / math.sqrt(2.0)))
    res.tests.append(("coverage vs nominal level",
                      TestReport("coverage_band", z, p, n_rep, abs(z) > 3.0, {"se_nominal": se0})))
    res.extra["coverage"] = rep
    return res


def _oracle_csv(law: LimitLaw, values: np.ndarray) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    if values.ndim == 1:
        wr.writerow(["draw", "x"])
        for i, v in enumerate(values):
            wr.writerow([i, repr(float(v))])
    else:
        wr.writerow(["draw"] + [f"w_{j}" for j in range(1, values.shape[1] + 1)])
        for i, row in enumerate(values):
            wr.writerow([i] + [repr(float(v)) for v in row])
    return buf.getvalue()


def _oracle(cfg, threads) -> _Result:
    res = _Result()
    law = LimitLaw.parse(str(cfg["law"]))
    vals = draw(law, cfg["n_replicates"], seed=cfg["seed"], stream_id=ORACLE_STREAM)
    res.files["oracle.csv"] = _oracle_csv(law, vals)
    if not law.is_vector:
        res.extra["mean"] = float(np.mean(vals))
        res.extra["sd"] = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
    return res


def replicate_csv(w: WindowSample, regime: str) -> str:
    """Raw window replicates: schema line, header, one row per replicate."""
    sv = spacings(w)
    buf = io.StringIO()
    buf.write(CSV_SCHEMA + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["replicate", "regime", "n", "k", "r", "s", "center"]
                + [f"left_{j}" for j in range(1, w.s + 1)] + [f"right_{j}" for j in range(1, w.r + 1)])
    center = np.atleast_1d(sv.center)
    left = sv.left.reshape(center.size, w.s)
    right = sv.right.reshape(center.size, w.r)
    for i in range(center.size):
        wr.writerow([i, regime, w.n, w.k, w.r, w.s, repr(float(center[i]))]
                    + [repr(float(v)) for v in left[i]] + [repr(float(v)) for v in right[i]])
    return buf.getvalue()


def _clean(x):
    """JSON-safe copy: non-finite floats become null, numpy scalars become Python."""
    if isinstance(x, Mapping):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def run_experiment(cfg: Mapping[str, Any], *, threads: int | None = None) -> tuple[dict[str, Any], dict[str, str]]:
    """Run a validated config (``seed`` already resolved); return ``(report, files)``.

    ``files`` maps file names to text content for the optional CSV outputs.
    """
    exp = cfg["experiment"]
    if exp == "oracle-dump":
        res = _oracle(cfg, threads)
    else:
        dist = from_config(cfg["dist"])
        runner: Callable = {
            "central-spacings": lambda: _central(cfg, dist, threads, joint=False),
            "central-joint": lambda: _central(cfg, dist, threads, joint=True),
            "intermediate-spacings": lambda: _intermediate(cfg, dist, threads),
            "extreme-window": lambda: _extreme(cfg, dist, threads),
            "counts": lambda: _counts(cfg, dist, threads),
            "inference-coverage": lambda: _coverage(cfg, dist, threads),
        }[exp]
        res = runner()
    tests = [{"name": name, **rep.to_dict()} for name, rep in res.tests]
    report = {
        "spacings_lab_version": __version__,
        "experiment": exp,
        "seed": cfg["seed"],
        "config": {k: v for k, v in cfg.items() if k != "output"},
        "tests": tests,
        "n_tests": len(tests),
        "n_rejected": sum(1 for t in tests if t["decision_at_1pct"]),
    }
    report.update(res.extra)
    files = {}
    if cfg.get("format") == "csv":
        if res.window is not None:
            files["replicates.csv"] = replicate_csv(res.window, res.regime)
        files.update(res.files)
    elif exp == "oracle-dump":
        files.update(res.files)
    return _clean(report), files


def report_json(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def summary_lines(report: Mapping[str, Any]) -> list[str]:
    lines = []
    for t in report["tests"]:
        verdict = "REJECT" if t["decision_at_1pct"] else "accept"
        stat = "nan" if t["statistic"] is None else f"{t['statistic']:.6g}"
        p = "nan" if t["p_value"] is None else f"{t['p_value']:.4g}"
        lines.append(f"{verdict:6s}  {t['name']}: statistic={stat} p={p}")
    return lines


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _cmd_run(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = validate_config(raw)
        cfg["seed"] = resolve_seed(args.seed, cfg)
        threads = default_threads() if args.threads is None else args.threads
        if threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        report, files = run_experiment(cfg, threads=threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpacingsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out = Path(args.out or raw.get("output") or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write(out / "report.json", report_json(report))
        for name, text in files.items():
            _write(out / name, text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    for line in summary_lines(report):
        print(line)
    print(f"{report['n_tests']} tests, {report['n_rejected']} rejected at 1%; report in {out / 'report.json'}")
    return 0


def _cmd_oracle(args) -> int:
    try:
        law = LimitLaw.parse(args.law)
        if args.draws < 1:
            raise ConfigError("--draws", "must be >= 1")
        seed = resolve_seed(args.seed, {})
        vals = draw(law, args.draws, seed=seed, stream_id=ORACLE_STREAM)
    except SpacingsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _oracle_csv(law, vals)
    if args.out:
        try:
            _write(Path(args.out), text)
        except OSError as exc:
            print(f"error: cannot write output: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spacings-lab", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment described by a JSON config")
    run.add_argument("--config", required=True, help="path to the JSON config")
    run.add_argument("--seed", type=lambda v: int(v, 0), default=None,
                     help=f"master seed (overrides config, then ${SEED_ENV})")
    run.add_argument("--threads", type=int, default=None, help="worker threads (default: all CPUs)")
    run.add_argument("--out", default=None, help="output directory (overrides config 'output')")
    run.set_defaults(func=_cmd_run)
    orc = sub.add_parser("oracle", help="dump draws of a limit law as CSV")
    orc.add_argument("--law", required=True, help='law tag, e.g. "exp-max:j=3" or "frechet-W-vector:alpha=1,j=3"')
    orc.add_argument("--draws", type=int, required=True)
    orc.add_argument("--seed", type=lambda v: int(v, 0), default=None)
    orc.add_argument("--out", default=None, help="CSV file (default: standard output)")
    orc.set_defaults(func=_cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
