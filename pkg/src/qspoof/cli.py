"""Command-line surface and experiment harness.

Subcommands: ``validate`` a JSON scenario config, ``sweep`` the (n, lambda)
grid into a CSV, fit decay ``rates`` from a sweep CSV, dump a single grid
point with ``attack-inspect``, and render an optional SVG ``plot``.  All
numeric output uses locale-independent decimal formatting and sweeps are
byte-deterministic across runs on the same platform.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, attacker, detector, radar
from .errors import (
    AllErrorsZero,
    ConfigError,
    DimensionCapExceeded,
    InsufficientData,
    ParseError,
    QspoofError,
)
from .qmat import DensityOperator, tensor_power

CSV_HEADER = (
    "n,lambda,tau,p_d_clean,p_f_clean,p_d_attacked,p_f_attacked,"
    "miss_clean,miss_attacked,rel_entropy_cost,wasserstein,separable_eigvecs"
)

_CONFIG_KEYS = {
    "K": int,
    "N_B": float,
    "k": float,
    "l": float,
    "x": float,
    "basis_mode": str,
    "c0bar": float,
    "d0bar": float,
    "c1bar": float,
    "d1bar": float,
    "lambdas": list,
    "n_max": int,
    "dimension_cap": int,
    "eigen_tolerance": float,
    "log_floor": float,
}

_STATIONARITY_DIRECTIONS = 20


@dataclass(frozen=True)
class SweepRow:
    """One (n, lambda) grid point of a sweep."""

    n: int
    lam: float
    tau: float
    p_d_clean: float
    p_f_clean: float
    p_d_attacked: float
    p_f_attacked: float
    miss_clean: float
    miss_attacked: float
    rel_entropy_cost: float
    wasserstein: float
    separable_eigvecs: bool


def load_config(path: str) -> radar.ScenarioConfig:
    """Parse a flat JSON scenario config, rejecting unknown keys by name."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key: {key}")
    kwargs = {}
    sched_kwargs = {}
    for key, value in raw.items():
        caster = _CONFIG_KEYS[key]
        try:
            if key == "lambdas":
                value = tuple(float(v) for v in value)
            elif caster is not list:
                value = caster(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key {key} has invalid value {value!r}") from exc
        if key in ("c0bar", "d0bar", "c1bar", "d1bar"):
            sched_kwargs[key] = value
        else:
            kwargs[key] = value
    if sched_kwargs:
        defaults = radar.DEFAULT_THRESHOLD
        for name in ("c0bar", "d0bar", "c1bar", "d1bar"):
            sched_kwargs.setdefault(name, getattr(defaults, name))
        try:
            kwargs["threshold"] = detector.ThresholdSchedule(**sched_kwargs)
        except QspoofError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return radar.ScenarioConfig(**kwargs)
    except QspoofError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def config_as_dict(cfg: radar.ScenarioConfig) -> dict:
    return {
        "K": cfg.K,
        "N_B": cfg.N_B,
        "k": cfg.k,
        "l": cfg.l,
        "x": cfg.x,
        "basis_mode": cfg.basis_mode,
        "c0bar": cfg.threshold.c0bar,
        "d0bar": cfg.threshold.d0bar,
        "c1bar": cfg.threshold.c1bar,
        "d1bar": cfg.threshold.d1bar,
        "lambdas": list(cfg.lambdas),
        "n_max": cfg.n_max,
        "dimension_cap": cfg.dimension_cap,
        "eigen_tolerance": cfg.eigen_tolerance,
        "log_floor": cfg.log_floor,
    }


def run_sweep(cfg: radar.ScenarioConfig) -> tuple[list[SweepRow], list[str]]:
    """Evaluate every (n, lambda) grid point in deterministic order.

    Over-budget depths are skipped with a warning record instead of aborting
    the run.  Grid points are independent pure computations; rows are emitted
    n ascending, then lambda ascending.
    """
    h = radar.build_hypotheses(cfg)
    lams = sorted(set(float(v) for v in cfg.lambdas))
    rows: list[SweepRow] = []
    skipped: list[str] = []
    for n in range(1, cfg.n_max + 1):
        try:
            rho1n = DensityOperator(tensor_power(h.rho1, n, cfg.dimension_cap), check=False)
            rho0n = DensityOperator(tensor_power(h.rho0, n, cfg.dimension_cap), check=False)
        except DimensionCapExceeded as exc:
            skipped.append(f"n={n}: {exc}")
            continue
        tau = detector.threshold(cfg.threshold, n)
        effect = detector.helstrom_effect_from_states(rho1n, rho0n, tau)
        p_d_clean, p_f_clean = detector.rates(effect, rho1n, rho0n)
        dims = [cfg.dim] * n
        for lam in lams:
            beta_n = attacker.beta(attacker.AttackConfig(lam), n)
            rho0_star = attacker.best_response_rho0(h.rho0, n, cfg.dimension_cap)
            rho1_star = attacker.best_response_rho1(
                h.rho1, effect, beta_n, n, log_floor=cfg.log_floor, cap=cfg.dimension_cap
            )
            p_d_att, p_f_att = detector.rates(effect, rho1_star, rho0_star)
            if math.isinf(beta_n):
                cost = 0.0
                dist = 0.0
                exponent = attacker.attack_exponent(
                    h.rho1, effect, math.inf, n, log_floor=cfg.log_floor, cap=cfg.dimension_cap
                )
            else:
                cost = analysis.relative_entropy(rho1_star, rho1n)
                dist = analysis.wasserstein_single(rho1_star, rho1n)
                exponent = attacker.attack_exponent(
                    h.rho1, effect, beta_n, n, log_floor=cfg.log_floor, cap=cfg.dimension_cap
                )
            report = analysis.separability_report(exponent, dims)
            rows.append(
                SweepRow(
                    n=n,
                    lam=lam,
                    tau=tau,
                    p_d_clean=p_d_clean,
                    p_f_clean=p_f_clean,
                    p_d_attacked=p_d_att,
                    p_f_attacked=p_f_att,
                    miss_clean=1.0 - p_d_clean,
                    miss_attacked=1.0 - p_d_att,
                    rel_entropy_cost=cost,
                    wasserstein=dist,
                    separable_eigvecs=report.all_product,
                )
            )
    return rows, skipped


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_sweep_csv(rows: list[SweepRow], path: str) -> None:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    _fmt(r.lam),
                    _fmt(r.tau),
                    _fmt(r.p_d_clean),
                    _fmt(r.p_f_clean),
                    _fmt(r.p_d_attacked),
                    _fmt(r.p_f_attacked),
                    _fmt(r.miss_clean),
                    _fmt(r.miss_attacked),
                    _fmt(r.rel_entropy_cost),
                    _fmt(r.wasserstein),
                    "true" if r.separable_eigvecs else "false",
                ]
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_sweep(config_path: str, output_path: str) -> int:
    cfg = load_config(config_path)
    rows, skipped = run_sweep(cfg)
    write_sweep_csv(rows, output_path)
    if skipped:
        with open(output_path + ".warnings.txt", "w", encoding="utf-8") as fh:
            fh.write("\n".join(skipped) + "\n")
    print(f"wrote {len(rows)} rows to {output_path}" + (f" ({len(skipped)} depths skipped)" if skipped else ""))
    return 0


def read_sweep_csv(path: str) -> list[dict]:
    """Rows of a sweep CSV as typed dicts."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise ParseError(f"{path} is empty")
            missing = [c for c in CSV_HEADER.split(",") if c not in reader.fieldnames]
            if missing:
                raise ParseError(f"{path} is missing columns: {', '.join(missing)}")
            rows = []
            for rec in reader:
                row = {key: float(val) for key, val in rec.items() if key != "separable_eigvecs"}
                row["n"] = int(row["n"])
                row["separable_eigvecs"] = rec["separable_eigvecs"] == "true"
                rows.append(row)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"{path} has a malformed numeric field: {exc}") from exc
    if not rows:
        raise ParseError(f"{path} has no data rows")
    return rows


def fit_decay_report(rows: list[dict]) -> list[dict]:
    """Per-lambda decay fits for the attacked miss rate and the false-alarm rate."""
    report = []
    lams = sorted({row["lambda"] for row in rows})
    for lam in lams:
        group = sorted((r for r in rows if r["lambda"] == lam), key=lambda r: r["n"])
        for series in ("miss_attacked", "p_f_clean"):
            label = "miss_attacked" if series == "miss_attacked" else "false_alarm"
            points = [(r["n"], r[series]) for r in group]
            entry = {
                "lambda": lam,
                "series": label,
                "slope": None,
                "intercept": None,
                "r_squared": None,
                "n_points": 0,
                "n_dropped": 0,
                "note": "",
            }
            try:
                fit = analysis.decay_rate_fit(points)
            except AllErrorsZero:
                entry["slope"] = -math.inf
                entry["note"] = "exact zero; exponent -inf sentinel"
            except InsufficientData as exc:
                entry["note"] = f"insufficient data: {exc}"
            else:
                entry.update(
                    slope=fit.slope,
                    intercept=fit.intercept,
                    r_squared=fit.r_squared,
                    n_points=len(fit.points),
                    n_dropped=len(fit.dropped),
                )
                if fit.dropped:
                    entry["note"] = f"dropped zero-error n={fit.dropped}"
            report.append(entry)
    return report


def _format_report_value(value, width: int) -> str:
    if value is None:
        return "-".ljust(width)
    if isinstance(value, float):
        return _fmt(value).ljust(width)
    return str(value).ljust(width)


def cmd_rates(csv_path: str, output_path: str | None = None) -> int:
    rows = read_sweep_csv(csv_path)
    report = fit_decay_report(rows)
    columns = ("lambda", "series", "slope", "intercept", "r_squared", "n_points", "n_dropped", "note")
    widths = (10, 15, 18, 18, 17, 10, 11, 0)
    print("".join(c.ljust(w) if w else c for c, w in zip(columns, widths)))
    for entry in report:
        print(
            "".join(
                _format_report_value(entry[c], w) if w else str(entry[c])
                for c, w in zip(columns, widths)
            )
        )
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(columns) + "\n")
            for entry in report:
                fields = []
                for c in columns:
                    v = entry[c]
                    if v is None:
                        fields.append("")
                    elif isinstance(v, float):
                        fields.append(_fmt(v))
                    else:
                        fields.append(str(v).replace(",", ";"))
                fh.write(",".join(fields) + "\n")
    return 0


def _matrix_payload(mat: np.ndarray) -> dict:
    arr = np.asarray(mat)
    return {
        "real": np.real(arr).tolist(),
        "imag": np.imag(arr).tolist(),
    }


def cmd_attack_inspect(config_path: str, n: int, lam: float, output_path: str | None = None) -> int:
    cfg = load_config(config_path)
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    h = radar.build_hypotheses(cfg)
    rho1n = DensityOperator(tensor_power(h.rho1, n, cfg.dimension_cap), check=False)
    rho0n = DensityOperator(tensor_power(h.rho0, n, cfg.dimension_cap), check=False)
    tau = detector.threshold(cfg.threshold, n)
    effect = detector.helstrom_effect_from_states(rho1n, rho0n, tau)
    beta_n = attacker.beta(attacker.AttackConfig(lam), n)
    rho0_star = attacker.best_response_rho0(h.rho0, n, cfg.dimension_cap)
    rho1_star = attacker.best_response_rho1(
        h.rho1, effect, beta_n, n, log_floor=cfg.log_floor, cap=cfg.dimension_cap
    )
    exponent = attacker.attack_exponent(
        h.rho1, effect, beta_n, n, log_floor=cfg.log_floor, cap=cfg.dimension_cap
    )
    report = analysis.separability_report(exponent, [cfg.dim] * n)
    attack_off = math.isinf(beta_n)
    if attack_off:
        residual = None
    else:
        residual = attacker.verify_stationarity(
            rho1_star, effect, rho1n, beta_n, _STATIONARITY_DIRECTIONS, seed=0
        )
    payload = {
        "n": n,
        "lambda": lam,
        "tau": tau,
        "beta": None if attack_off else beta_n,
        "attack_off": attack_off,
        "rho1_clean": _matrix_payload(rho1n.mat),
        "rho1_attacked": _matrix_payload(rho1_star.mat),
        "rho0_clean": _matrix_payload(rho0n.mat),
        "rho0_attacked": _matrix_payload(rho0_star.mat),
        "helstrom_effect": _matrix_payload(effect.mat),
        "helstrom_rank": effect.rank,
        "exponent_eigenvalues": [float(v) for v in np.sort(np.linalg.eigvalsh(exponent.mat))[::-1]],
        "separability": {
            "all_product": report.all_product,
            "per_vector": [[w, ok, resid] for w, ok, resid in report.per_vector],
            "reconstruction_distance": report.reconstruction_distance,
            "factors": None
            if report.factors is None
            else [_matrix_payload(f.mat) for f in report.factors],
        },
        "stationarity_residual": residual,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_validate(config_path: str) -> int:
    cfg = load_config(config_path)
    radar.validate_scenario(cfg)
    print(json.dumps(config_as_dict(cfg), indent=2, sort_keys=True))
    return 0


def cmd_plot(csv_path: str, output_svg: str) -> int:
    rows = read_sweep_csv(csv_path)
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    lams = sorted({row["lambda"] for row in rows})
    colors = plt.cm.viridis(np.linspace(0.0, 0.9, len(lams)))
    for lam, color in zip(lams, colors):
        group = sorted((r for r in rows if r["lambda"] == lam), key=lambda r: r["n"])
        ns = [r["n"] for r in group]
        miss = [r["miss_attacked"] for r in group]
        pf = [r["p_f_clean"] for r in group]
        ax.plot(ns, [m if m > 0 else float("nan") for m in miss],
                marker="o", color=color, label=f"miss, lambda={lam:g}")
        ax.plot(ns, [p if p > 0 else float("nan") for p in pf],
                marker="s", linestyle="--", color=color, label=f"false alarm, lambda={lam:g}")
    ax.set_yscale("log")
    ax.set_xlabel("observations n")
    ax.set_ylabel("error probability")
    ax.set_title("miss and false-alarm decay under attacks of varying price")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(output_svg, format="svg")
    plt.close(fig)
    print(f"wrote {output_svg}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspoof",
        description="adversarial quantum hypothesis testing experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario config and echo it resolved")
    p.add_argument("--config", required=True, help="JSON scenario config")

    p = sub.add_parser("sweep", help="run the (n, lambda) grid and write a CSV")
    p.add_argument("--config", required=True, help="JSON scenario config")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("rates", help="fit per-lambda decay rates from a sweep CSV")
    p.add_argument("--csv", required=True, help="sweep CSV path")
    p.add_argument("--out", help="optional report CSV path")

    p = sub.add_parser("attack-inspect", help="dump one grid point as JSON")
    p.add_argument("--config", required=True, help="JSON scenario config")
    p.add_argument("--n", required=True, type=int, help="number of observations")
    p.add_argument("--lambda", dest="lam", required=True, type=float, help="distortion price base")
    p.add_argument("--out", help="optional output JSON path (default: stdout)")

    p = sub.add_parser("plot", help="render a log-scale decay chart as SVG")
    p.add_argument("--csv", required=True, help="sweep CSV path")
    p.add_argument("--out", required=True, help="output SVG path")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args.config)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out)
        if args.command == "rates":
            return cmd_rates(args.csv, args.out)
        if args.command == "attack-inspect":
            return cmd_attack_inspect(args.config, args.n, args.lam, args.out)
        if args.command == "plot":
            return cmd_plot(args.csv, args.out)
        raise AssertionError(f"unhandled command {args.command}")
    except QspoofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
