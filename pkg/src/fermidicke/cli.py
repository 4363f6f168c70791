"""``fermidicke`` command line: rates, classify, graph, evolve, sweep.

Every run resolves its parameters as defaults < ``--config`` JSON file <
command-line flags, and writes the resolved config next to its outputs.
Exit codes: 0 success, 2 usage/validation, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import analytics, collective, dynamics
from .collective import CollectiveModeSet, ConsistencyError
from .hilbert import CapacityError, build_basis, product_superposition_state

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
STATS_CODES = ("bf", "fb", "bb")
CLASSIFY_MAX_N = 12
GRAPH_MAX_N = 12
SWEEP_MAX_POINTS = 10_000


class UsageError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    pass


def parse_angle(text) -> float:
    """Parse ``pi``, ``-pi/2``, ``0.5pi``, ``2*pi/3`` or a plain float."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().replace(" ", "")
    m = re.fullmatch(r"([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?", s)
    if m:
        coef = m.group(1)
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(coef + "1"))
        return value / float(m.group(2)) if m.group(2) else value
    try:
        return float(s)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def _float_list(text) -> list[float]:
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [parse_angle(v) for v in text]
    return [parse_angle(v) for v in str(text).split(",") if v.strip()]


@dataclass
class RunConfig:
    """Resolved parameters of one CLI run. Round-trips through JSON."""

    command: str
    n: int = 2
    m: int = 1
    stats: str = "bf"
    g: float = 1.0
    kappa: float = 0.0
    kappa_phi: float = 0.0
    gamma0: float = 1.0
    phi: float = 0.0
    phases: list[float] | None = None
    mode_rates: list[float] | None = None
    t_max: float | str = "auto"
    points: int = 201
    rtol: float = dynamics.DEFAULT_RTOL
    atol: float = dynamics.DEFAULT_ATOL
    method: str = "DOP853"
    engine: str = "density"
    initial: str = "all-parent"
    param: str | None = None
    values: list[float] | None = None
    scale: str = "abs"
    workers: int = 1
    out: str | None = None
    format: str | None = None
    dump: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        stats_ok = STATS_CODES + (("all",) if self.command == "rates" else ())
        if self.stats not in stats_ok:
            raise UsageError(f"--stats must be one of {', '.join(stats_ok)}")
        if not isinstance(self.n, int) or self.n < 1:
            raise UsageError(f"--n must be a positive integer, got {self.n!r}")
        for name in ("g", "kappa", "kappa_phi", "gamma0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value >= 0 and math.isfinite(value)):
                raise UsageError(f"--{name.replace('_', '-')} must be a finite rate >= 0, got {value!r}")
        if self.command in ("rates", "classify") and not self.gamma0 > 0:
            raise UsageError("--gamma0 must be positive")
        if not isinstance(self.points, int) or self.points < 2:
            raise UsageError(f"--points must be an integer >= 2, got {self.points!r}")
        if self.t_max != "auto" and not (isinstance(self.t_max, (int, float)) and self.t_max > 0):
            raise UsageError(f"--t-max must be positive or 'auto', got {self.t_max!r}")
        if self.phases is not None and len(self.phases) != self.n:
            raise UsageError(f"--phases needs {self.n} values, got {len(self.phases)}")
        if self.mode_rates is not None and any(r < 0 for r in self.mode_rates):
            raise UsageError("--mode-rates must be >= 0")
        if self.engine not in ("density", "moments"):
            raise UsageError("--engine must be density or moments")
        if self.scale not in ("abs", "ngamma0"):
            raise UsageError("--scale must be abs or ngamma0")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def _fmt(x) -> str:
    return repr(float(x))


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# rates


def rate_rows(cfg: RunConfig) -> list[dict]:
    """Closed-form versus numeric rates for each requested statistics."""
    stats_list = STATS_CODES if cfg.stats == "all" else (cfg.stats,)
    phases = np.asarray(cfg.phases) if cfg.phases is not None else analytics.uniform_phases(cfg.n, cfg.phi)
    rows = []
    for code in stats_list:
        basis = build_basis(cfg.n, 0, code)
        L = collective.collective_jump(basis, cfg.gamma0)
        numeric = analytics.rate_numeric(product_superposition_state(basis, phases), L)
        if cfg.phases is not None:
            formula, closed = "correlation-sum", analytics.rate_closed_form(phases, cfg.gamma0, code)
        else:
            params = analytics.RateParams(cfg.n, cfg.gamma0, cfg.phi)
            if code == "bf":
                formula, closed = "(N-1)/2(1-cos phi)+1/2", analytics.rate_fermionic_product_state(params)
            elif code == "fb":
                formula, closed = "(N-1)/2(1+cos phi)+1/2", analytics.rate_fermion_parent_product_state(params)
            else:
                formula, closed = "N/4+|sum e^(i j phi)|^2/4", analytics.rate_bosonic_product_state(cfg.n, cfg.gamma0, cfg.phi)
        rows.append(
            {"stats": code, "formula": formula, "closed_form": float(closed), "numeric": numeric,
             "abs_diff": abs(numeric - closed)}
        )
    return rows


def cmd_rates(cfg: RunConfig, stdout) -> int:
    rows = rate_rows(cfg)
    limit = 1e-8 * cfg.n * cfg.gamma0
    print(f"N={cfg.n} gamma0={_fmt(cfg.gamma0)} phi={_fmt(cfg.phi)}", file=stdout)
    print("stats,closed_form,numeric,abs_diff,formula", file=stdout)
    for r in rows:
        print(f"{r['stats']},{_fmt(r['closed_form'])},{_fmt(r['numeric'])},{_fmt(r['abs_diff'])},{r['formula']}", file=stdout)
    if cfg.out:
        if (cfg.format or "csv") == "json":
            _write(cfg.out, json.dumps({"config": asdict(cfg), "rows": rows}, indent=2) + "\n")
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["stats", "closed_form", "numeric", "abs_diff", "formula"])
            for r in rows:
                w.writerow([r["stats"], _fmt(r["closed_form"]), _fmt(r["numeric"]), _fmt(r["abs_diff"]), r["formula"]])
            _write(cfg.out, buf.getvalue())
            _write(cfg.out + ".config.json", cfg.to_json())
    bad = [r for r in rows if r["abs_diff"] > limit]
    if bad:
        raise NumericalFailure(f"closed form and numeric rate differ by more than {limit:.3g} for {[r['stats'] for r in bad]}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# classify


def _ket(basis, vec, tol=1e-9) -> str:
    terms = []
    for idx in np.flatnonzero(np.abs(vec) > tol):
        a = vec[idx]
        coef = f"{a.real:+.4f}" if abs(a.imag) < tol else f"({a.real:+.4f}{a.imag:+.4f}j)"
        terms.append(f"{coef}{basis.label(idx)}")
    return " ".join(terms)


def cmd_classify(cfg: RunConfig, stdout) -> int:
    if cfg.n > CLASSIFY_MAX_N:
        raise CapacityError(f"classify supports N <= {CLASSIFY_MAX_N}, got {cfg.n}")
    basis = build_basis(cfg.n, 0, cfg.stats)
    L = collective.collective_jump(basis, cfg.gamma0)
    cl = collective.classify_states(L, basis)
    table = cl.counts_by_excitation()
    lines = [f"N={cfg.n} stats={cfg.stats} gamma0={_fmt(cfg.gamma0)} dim={basis.dim}"]
    lines.append("eigenvalues: " + ", ".join(f"{v:.12g} x{k}" for v, k in cl.multiplicities))
    lines.append(f"{cl.n_bright} bright, {cl.n_dark} dark")
    lines.append("N_e,bright,dark")
    for ne in sorted(table, reverse=True):
        lines.append(f"{ne},{table[ne][0]},{table[ne][1]}")
    show_kets = basis.dim <= 16
    lines.append("bright states:")
    for k in range(cl.n_bright):
        desc = f"  B{k} N_e={cl.bright_excitations[k]} rate={cl.bright_rates[k]:.12g}"
        lines.append(desc + (f" : {_ket(basis, cl.bright[:, k])}" if show_kets else ""))
    if cl.pairs:
        lines.append("pairs (L B -> D):")
        for b, d in cl.pairs:
            desc = f"  B{b} -> D{d} N_e={cl.dark_excitations[d]}"
            lines.append(desc + (f" : {_ket(basis, cl.dark[:, d])}" if show_kets else ""))
    else:
        lines.append("dark states:")
        for d in range(cl.n_dark):
            desc = f"  D{d} N_e={cl.dark_excitations[d]}"
            lines.append(desc + (f" : {_ket(basis, cl.dark[:, d])}" if show_kets else ""))
    print("\n".join(lines), file=stdout)
    report = {
        "config": asdict(cfg),
        "multiplicities": [[v, k] for v, k in cl.multiplicities],
        "bright": cl.n_bright,
        "dark": cl.n_dark,
        "by_excitation": {str(ne): {"bright": b, "dark": d} for ne, (b, d) in sorted(table.items())},
        "pairs": [[b, d] for b, d in cl.pairs],
    }
    if cfg.out:
        _write(cfg.out, json.dumps(report, indent=2) + "\n")
    if cfg.dump:
        def cols(mat):
            return [[[float(z.real), float(z.imag)] for z in col] for col in mat.T]

        dump = {
            "config": asdict(cfg),
            "basis_labels": [basis.label(i) for i in range(basis.dim)],
            "bright": cols(cl.bright),
            "bright_excitations": cl.bright_excitations.tolist(),
            "bright_rates": cl.bright_rates.tolist(),
            "dark": cols(cl.dark),
            "dark_excitations": cl.dark_excitations.tolist(),
        }
        _write(cfg.dump, json.dumps(dump) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# graph


def cmd_graph(cfg: RunConfig, stdout) -> int:
    if not cfg.m <= cfg.n <= GRAPH_MAX_N:
        raise UsageError(f"graph needs M <= N <= {GRAPH_MAX_N}, got N={cfg.n}, M={cfg.m}")
    if cfg.m < 1:
        raise UsageError("--m must be >= 1")
    rates = cfg.mode_rates if cfg.mode_rates is not None else [1.0] * cfg.m
    if len(rates) not in (1, cfg.m):
        raise UsageError(f"--mode-rates needs 1 or {cfg.m} values")
    basis = build_basis(cfg.n, 0, cfg.stats)
    if not basis.stats.fermionic:
        raise UsageError("sector graphs are defined for fermionic emission (bf or fb)")
    modes = CollectiveModeSet.dft(cfg.n, cfg.m, rates)
    graph = collective.multimode_sector_graph(basis, modes)
    sectors = graph.sectors()
    sizes = {len(v) for v in sectors.values()}
    cube_ok = all(collective.is_hypercube(graph, members) for members in sectors.values())
    size = sizes.pop() if len(sizes) == 1 else "mixed"
    print(f"sectors={len(sectors)}, sector_size={size}, hypercube={'ok' if cube_ok else 'fail'}", file=stdout)
    prefix = cfg.out or "sector_graph"
    fmt = cfg.format or "both"
    if fmt in ("dot", "both"):
        _write(prefix + ".dot", graph.to_dot())
    if fmt in ("json", "both"):
        payload = graph.to_dict()
        payload["config"] = asdict(cfg)
        _write(prefix + ".json", json.dumps(payload, indent=2) + "\n")
    _write(prefix + ".config.json", cfg.to_json())
    if not cube_ok:
        raise NumericalFailure("sector graph is not a hypercube")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evolve / sweep


def model_params(cfg: RunConfig) -> dynamics.ModelParams:
    return dynamics.ModelParams(cfg.g, cfg.n, cfg.kappa, cfg.kappa_phi, cfg.stats)


def auto_t_max(params: dynamics.ModelParams) -> float:
    """Window that shows the regime: 10 Rabi periods, 5 damped periods, or 10 slow decay times."""
    omega = params.collective_coupling
    if params.kappa == 0:
        if omega == 0:
            return 1.0
        return 10 * math.pi / omega
    if params.kappa_phi > 0:
        return 8 / abs(dynamics.dephasing_decay_rates(params).lam_plus)
    regime = dynamics.regime_classify(params).cavity
    if regime == "weak_damping":
        return 5 * math.pi / omega
    if params.g == 0:
        return 10 / params.kappa
    return 10 / params.collective_rate


def run_evolution(cfg: RunConfig) -> dynamics.Trajectory:
    params = model_params(cfg)
    t_max = auto_t_max(params) if cfg.t_max == "auto" else float(cfg.t_max)
    t_grid = np.linspace(0.0, t_max, cfg.points)
    basis = dynamics.cavity_basis(params) if cfg.engine == "density" else build_basis(cfg.n, 1, cfg.stats)
    psi0 = dynamics.initial_state(basis, cfg.initial, cfg.phases)
    if cfg.engine == "moments":
        m0 = dynamics.MomentState.from_state(psi0, basis)
        method = "auto" if cfg.method == "DOP853" else cfg.method
        return dynamics.evolve_moments(m0, params, t_grid, cfg.rtol, cfg.atol, method=method)
    return dynamics.evolve_density_matrix(psi0, params, t_grid, cfg.rtol, cfg.atol, method=cfg.method)


def evolve_report(cfg: RunConfig, traj: dynamics.Trajectory) -> dict:
    params = traj.params
    label = dynamics.regime_classify(params)
    report = {
        "config": asdict(cfg),
        "regime": {"cavity": label.cavity, "dephasing": label.dephasing, "flags": list(label.flags)},
        "final": {name: float(getattr(traj, name)[-1]) for name in dynamics.Trajectory.FIELDS},
    }
    if cfg.initial == "all-parent" or cfg.initial == "single-bright":
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            reference = dynamics.analytic_n0(label.cavity, params, traj.t)
        report["analytic_regime"] = label.cavity
        report["max_abs_deviation"] = float(np.abs(traj.n_C - reference).max())
        if label.dephasing != "no_dephasing":
            report["note"] = "closed form ignores dephasing"
    diag = {k: v for k, v in traj.diagnostics.items() if k != "final_rho"}
    report["diagnostics"] = diag
    return report


def cmd_evolve(cfg: RunConfig, stdout) -> int:
    traj = run_evolution(cfg)
    out = cfg.out or "trajectory." + (cfg.format or "csv")
    fmt = cfg.format or ("json" if out.endswith(".json") else "csv")
    if fmt == "json":
        payload = traj.to_dict()
        payload["config"] = asdict(cfg)
        _write(out, json.dumps(payload, indent=2) + "\n")
    else:
        _write(out, traj.to_csv())
    report = evolve_report(cfg, traj)
    _write(out + ".report.json", json.dumps(report, indent=2) + "\n")
    dev = report.get("max_abs_deviation")
    regime = report["regime"]
    print(
        f"regime={regime['cavity']}/{regime['dephasing']} points={cfg.points} "
        f"emitted={_fmt(traj.emitted[-1])}" + (f" max_deviation={_fmt(dev)}" if dev is not None else ""),
        file=stdout,
    )
    return EXIT_OK


SWEEP_PARAMS = ("n", "g", "kappa", "kappa_phi")
SWEEP_COLUMNS = (
    "index", "value", "n_C", "n_nu", "n_bar", "emitted",
    "rate_n_bar", "rate_n_C", "rabi_frequency", "status",
)


def _sweep_point(args) -> dict:
    index, base, value = args
    data = asdict(base)
    if base.param == "n":
        data["n"] = int(round(value))
    else:
        if base.scale == "ngamma0":
            value_abs = value * dynamics.ModelParams(base.g, base.n, base.kappa).collective_rate
        else:
            value_abs = value
        data[base.param] = float(value_abs)
    data.update(command="evolve", values=None, param=None)
    cfg = RunConfig.from_dict(data)
    row = {"index": index, "value": value}
    try:
        cfg.validate()
        traj = run_evolution(cfg)
        row.update({name: float(getattr(traj, name)[-1]) for name in ("n_C", "n_nu", "n_bar", "emitted")})
        row["rate_n_bar"] = dynamics.fit_decay_rate(traj.t, traj.n_bar)
        row["rate_n_C"] = dynamics.fit_decay_rate(traj.t, traj.n_C)
        row["rabi_frequency"] = dynamics.fit_rabi_frequency(traj.t, traj.n_C)
        row["status"] = "ok"
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        for name in SWEEP_COLUMNS[2:-1]:
            row[name] = float("nan")
        row["status"] = f"error: {exc}".replace(",", ";").replace("\n", " ")
    return row


def run_sweep(cfg: RunConfig) -> list[dict]:
    if cfg.param not in SWEEP_PARAMS:
        raise UsageError(f"--param must be one of {', '.join(SWEEP_PARAMS)}")
    if not cfg.values:
        raise UsageError("--values is required for sweep")
    if len(cfg.values) > SWEEP_MAX_POINTS:
        raise UsageError(f"sweep grid has {len(cfg.values)} points (max {SWEEP_MAX_POINTS})")
    if cfg.scale == "ngamma0" and (cfg.param != "kappa_phi" or cfg.kappa <= 0):
        raise UsageError("--scale ngamma0 applies to --param kappa_phi with kappa > 0")
    jobs = [(k, cfg, float(v)) for k, v in enumerate(cfg.values)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(job) for job in jobs]
    return sorted(rows, key=lambda r: r["index"])


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([r["index"]] + [_fmt(r[c]) for c in SWEEP_COLUMNS[1:-1]] + [r["status"]])
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig, stdout) -> int:
    rows = run_sweep(cfg)
    out = cfg.out or "sweep.csv"
    if (cfg.format or "csv") == "json":
        _write(out, json.dumps({"config": asdict(cfg), "rows": rows}, indent=2) + "\n")
    else:
        _write(out, sweep_csv(rows))
        _write(out + ".config.json", cfg.to_json())
    failed = sum(r["status"] != "ok" for r in rows)
    print(f"points={len(rows)} failed={failed} out={out}", file=stdout)
    return EXIT_OK


COMMANDS = {
    "rates": cmd_rates,
    "classify": cmd_classify,
    "graph": cmd_graph,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# argument parsing


def _t_max(text):
    return text if text == "auto" else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermidicke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--out", default=S, help="output path (prefix for graph)")
        p.add_argument("--n", type=int, default=S, help="number of atoms N")
        p.add_argument("--stats", default=S, help="bf, fb or bb (rates also accepts all)")

    p = sub.add_parser("rates", help="closed-form vs numeric product-state emission rates")
    common(p)
    p.add_argument("--phi", type=parse_angle, default=S, help="uniform neighbour phase, e.g. pi or pi/2")
    p.add_argument("--phases", type=_float_list, default=S, help="comma separated per-site phases")
    p.add_argument("--gamma0", type=float, default=S)
    p.add_argument("--format", choices=("csv", "json"), default=S)

    p = sub.add_parser("classify", help="bright/dark classification of L^+L")
    common(p)
    p.add_argument("--gamma0", type=float, default=S)
    p.add_argument("--dump", default=S, help="write the eigenbasis as JSON")

    p = sub.add_parser("graph", help="multi-mode sector graphs (DOT/JSON)")
    common(p)
    p.add_argument("--m", type=int, default=S, help="number of emitting modes M")
    p.add_argument("--mode-rates", dest="mode_rates", type=_float_list, default=S)
    p.add_argument("--format", choices=("dot", "json", "both"), default=S)

    for name, helptext in (("evolve", "integrate one trajectory"), ("sweep", "evolve over a parameter grid")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--g", type=float, default=S)
        p.add_argument("--kappa", type=float, default=S)
        p.add_argument("--kappa-phi", dest="kappa_phi", type=float, default=S)
        p.add_argument("--t-max", dest="t_max", type=_t_max, default=S)
        p.add_argument("--points", type=int, default=S)
        p.add_argument("--rtol", type=float, default=S)
        p.add_argument("--atol", type=float, default=S)
        p.add_argument("--method", default=S, help="scipy solve_ivp method (default DOP853)")
        p.add_argument("--engine", choices=("density", "moments"), default=S)
        p.add_argument("--initial", choices=("all-parent", "single-bright", "all-daughter", "product"), default=S)
        p.add_argument("--phases", type=_float_list, default=S)
        p.add_argument("--format", choices=("csv", "json"), default=S)
        if name == "sweep":
            p.add_argument("--param", choices=SWEEP_PARAMS, default=S)
            p.add_argument("--values", type=_float_list, default=S, help="comma separated grid values")
            p.add_argument("--scale", choices=("abs", "ngamma0"), default=S,
                           help="ngamma0: kappa/kappa_phi values are multiples of N gamma0")
            p.add_argument("--workers", type=int, default=S)
    return parser


def resolve_config(argv) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    data = {}
    if config_path:
        try:
            with open(config_path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {config_path}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {config_path} is not valid JSON: {exc}") from exc
        data.pop("command", None)
    data.update(args)
    if command == "rates" and "stats" not in data:
        data["stats"] = "all"
    if "phi" in data:
        data["phi"] = parse_angle(data["phi"])
    cfg = RunConfig.from_dict({"command": command, **data})
    cfg.validate()
    return cfg


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = resolve_config(argv)
        return COMMANDS[cfg.command](cfg, stdout)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, CapacityError, TypeError) as exc:
        print(f"fermidicke: error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fermidicke: I/O error: {exc}", file=stderr)
        return EXIT_IO
    except (NumericalFailure, ConsistencyError, dynamics.IntegrationError) as exc:
        print(f"fermidicke: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fermidicke: error: {exc}", file=stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
