"""Command-line front end: every analysis as a CSV or JSON table.

Exit status is 0 on success, 1 on a usage error (bad flags, unknown
vertices, unreadable or unwritable files) and 2 when a numerical contract is
violated.  Failures print a one-line JSON record on stderr.

Examples
--------
    graphkernel gram --family tree --levels 3
    graphkernel sweep --family tree --rule level --K 6
    graphkernel dipole --family segment --n 5 --x 2
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import eigen
from .dipole import ChargeDistribution, solve_dipole, solve_poisson
from .eigen import symmetric_eig
from .errors import ContractViolation, GraphError
from .graph import (CUMULATIVE, FAMILIES, RULES, WeightedGraph, dump_graph, exhaustion,
                    load_graph, make_family)
from .greens import REPORT_COLUMNS, greens_laplacian_check
from .kernel import PSD_TOL, gram_from_energy, psd_check, szego_gram
from .tables import emit_table
from .truncation import (RANK1_TOL, SWEEP_COLUMNS, build_truncation, check_rank1, gap_sweep,
                         project_delta, symmetry_criterion, truncated_norm)

COMMANDS = ("gen", "gram", "spec", "truncate", "sweep", "dipole", "green", "psdcheck",
            "criterion")
EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2


class UsageError(GraphError):
    pass


@dataclass
class RunConfig:
    """One CLI invocation.  Exactly one of ``family`` / ``graph_file`` is set."""

    command: str
    family: str | None = None
    graph_file: str | None = None
    size: int | None = None
    base: str | None = None
    rule: str = CUMULATIVE
    K: int | None = None
    x: str | None = None
    y: str | None = None
    charge: str | None = None
    points: tuple[float, ...] | None = None
    radius: int | None = None
    fmt: str = "csv"
    out: str | None = None
    tol_eig: float = eigen.OFF_TOL
    tol_psd: float = PSD_TOL
    tol_rank1: float = RANK1_TOL
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.points is None and (self.family is None) == (self.graph_file is None):
            raise UsageError("give exactly one of --family or --graph")
        if self.family is not None and self.family not in FAMILIES:
            raise UsageError(f"unknown family {self.family!r}")
        if self.rule not in RULES:
            raise UsageError(f"unknown rule {self.rule!r}")
        if self.K is not None and self.K < 1:
            raise UsageError("--K must be >= 1")
        if self.command in ("sweep", "criterion") and self.K is None:
            raise UsageError(f"{self.command} needs --K")
        if self.fmt == "edgelist" and self.command != "gen":
            raise UsageError("edgelist format is only available for gen")


# ---------------------------------------------------------------------------
# input resolution

def _graph(cfg: RunConfig) -> WeightedGraph:
    if cfg.graph_file is not None:
        try:
            with open(cfg.graph_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read graph file: {exc}") from None
        g = load_graph(text)
    else:
        size = cfg.size if cfg.size is not None else cfg.K
        if size is None and cfg.command == "green":
            size = cfg.radius
        if cfg.command in ("sweep", "criterion") and cfg.K is not None:
            size = max(size, cfg.K)
        if size is None:
            raise UsageError(f"{cfg.family} needs a size (--n / --levels)")
        g = make_family(cfg.family, size)
    g.require_base(cfg.base)
    return g


def _index_set(cfg: RunConfig, g: WeightedGraph, base: str) -> list[str]:
    if cfg.K is not None:
        return exhaustion(g, cfg.rule, cfg.K, base)
    return [v for v in g.vertices if v != base]


def _need(cfg: RunConfig, name: str) -> str:
    val = getattr(cfg, name)
    if val is None:
        raise UsageError(f"{cfg.command} needs --{name}")
    return val


# ---------------------------------------------------------------------------
# commands; each returns (document, metadata)

def _cmd_gen(cfg, g, base):
    if cfg.fmt == "edgelist":
        return dump_graph(g), {}
    rows = [[a, b, w] for (a, b), w in g.weights.items()]
    return emit_table(rows, ["a", "b", "weight"], cfg.fmt), {"vertices": len(g)}


def _cmd_gram(cfg, g, base):
    if cfg.points is not None:
        M = szego_gram(cfg.points)
    else:
        M = gram_from_energy(g, _index_set(cfg, g, base), base)
    doc = M.to_csv() if cfg.fmt == "csv" else M.to_json()
    return doc, {"n": len(M), "integral": M.is_integral()}


def _cmd_spec(cfg, g, base):
    M = gram_from_energy(g, _index_set(cfg, g, base), base)
    d = symmetric_eig(M.entries)
    rows = [[i, lam] for i, lam in enumerate(d.eigenvalues)]
    return emit_table(rows, ["i", "lambda"], cfg.fmt), {"n": len(M), "sweeps": d.sweeps}


def _cmd_truncate(cfg, g, base):
    t = build_truncation(g, _index_set(cfg, g, base), base)
    res = check_rank1(t, cfg.tol_rank1)
    _, normsq = project_delta(t)
    rows = [[j, lam, 1.0 / lam, ov, p]
            for j, (lam, ov, p) in enumerate(zip(t.eigenvalues, t.chi_overlap, t.delta_coeffs))]
    doc = emit_table(rows, ["j", "lambda", "inv_lambda", "chi_overlap", "delta_coeff"], cfg.fmt)
    meta = {"n_F": len(t.F), "dropped": t.dropped, "warnings": list(t.warnings),
            "rank1_residual": res, "proj_delta_normsq": normsq,
            "truncated_norm": truncated_norm(t)}
    return doc, meta


def _cmd_sweep(cfg, g, base):
    res = gap_sweep(g, cfg.rule, cfg.K, base)
    doc = emit_table([r.as_row() for r in res.rows], SWEEP_COLUMNS, cfg.fmt)
    meta = {"rule": res.rule, "delta_normsq": res.delta_normsq,
            "inverse": res.inverse_flag, "monotone": res.monotone,
            "truncated_norm": [r.truncated_norm for r in res.rows],
            "note": "gap_est and sigma_est are running estimates over F_1..F_K"}
    return doc, meta


def _cmd_dipole(cfg, g, base):
    if cfg.charge is not None:
        try:
            w = ChargeDistribution.from_json(g, cfg.charge)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--charge is not valid JSON: {exc}") from None
        v = solve_poisson(g, w, base)
    else:
        x = _need(cfg, "x")
        v = solve_dipole(g, x, cfg.y if cfg.y is not None else base, base)
    rows = [[u, val] for u, val in zip(g.vertices, v.values)]
    return emit_table(rows, ["vertex", "value"], cfg.fmt), {"base": base}


def _cmd_green(cfg, g, base):
    x = _need(cfg, "x")
    if cfg.family is not None:
        if base != g.base:
            raise UsageError("green uses the family's own base point")
        rep = greens_laplacian_check(cfg.family, x, cfg.radius)
    else:
        rep = greens_laplacian_check(g, x, base=base)
    meta = {"dipole_identity_residual": rep.dipole_identity_residual,
            "kernel_formula_max": rep.kernel_formula_max,
            "neighbor_sum_max": rep.neighbor_sum_max}
    return emit_table(rep.rows(), REPORT_COLUMNS, cfg.fmt), meta


def _cmd_psdcheck(cfg, g, base):
    if cfg.points is not None:
        M = szego_gram(cfg.points)
    else:
        M = gram_from_energy(g, _index_set(cfg, g, base), base)
    ok, lo = psd_check(M, cfg.tol_psd)
    doc = emit_table([[len(M), lo, str(ok).lower()]], ["n", "min_eigenvalue", "psd"], cfg.fmt)
    if not ok:
        raise ContractViolation(f"kernel matrix is not positive semidefinite (min eigenvalue {lo:.12g})")
    return doc, {}


def _cmd_criterion(cfg, g, base):
    x = _need(cfg, "x")
    res = symmetry_criterion(g, x, cfg.rule, cfg.K, base)
    rows = [[k, n, s, res.bound] for k, n, s in zip(res.ks, res.sizes, res.values)]
    meta = {"nondecreasing": res.nondecreasing, "within_bound": res.within_bound,
            "supremum_estimate": res.supremum_estimate}
    return emit_table(rows, ["k", "n_F", "s_k", "bound"], cfg.fmt), meta


_DISPATCH = {name: globals()[f"_cmd_{name}"] for name in COMMANDS}


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def execute(cfg: RunConfig, stdout=None) -> dict:
    """Run ``cfg`` and write its table; returns the metadata record.

    Errors propagate as :class:`GraphError` / :class:`ContractViolation`.
    """
    stdout = sys.stdout if stdout is None else stdout
    with eigen.tolerance(cfg.tol_eig):
        if cfg.points is not None and cfg.command in ("gram", "psdcheck"):
            g, base = None, None
        elif cfg.points is not None:
            raise UsageError("--points is only accepted by gram and psdcheck")
        else:
            g = _graph(cfg)
            base = g.require_base(cfg.base)
        doc, meta = _DISPATCH[cfg.command](cfg, g, base)
    meta = {"command": cfg.command, "flags": cfg.flags,
            "tolerances": {"eig": cfg.tol_eig, "psd": cfg.tol_psd, "rank1": cfg.tol_rank1},
            **meta}
    if cfg.out is None:
        stdout.write(doc)
    else:
        _write(cfg.out, doc)
        _write(cfg.out + ".meta.json",
               json.dumps(meta, ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    return meta


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute and translate failures into exit codes plus a JSON error record."""
    stderr = sys.stderr if stderr is None else stderr
    try:
        execute(cfg, stdout)
    except ContractViolation as exc:
        _report(stderr, "contract_violation", cfg.command, exc)
        return EXIT_CONTRACT
    except GraphError as exc:
        _report(stderr, "usage", cfg.command, exc)
        return EXIT_USAGE
    return EXIT_OK


def _report(stream, kind, command, exc):
    rec = {"error": kind, "command": command, "message": str(exc)}
    stream.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _points(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--family", choices=FAMILIES)
    src.add_argument("--graph", metavar="FILE", help="edge-list file (a b weight per line)")
    common.add_argument("--n", type=int, help="segment size (vertices -n..n)")
    common.add_argument("--levels", type=int, help="tree depth")
    common.add_argument("--base")
    common.add_argument("--rule", choices=RULES, default=CUMULATIVE)
    common.add_argument("--K", type=int)
    common.add_argument("--x")
    common.add_argument("--y")
    common.add_argument("--charge", metavar="JSON", help='e.g. \'{"1": 1, "-1": -1}\'')
    common.add_argument("--points", type=_points, help="comma-separated samples in [0, 1)")
    common.add_argument("--radius", type=int)
    common.add_argument("--format", dest="fmt", choices=("csv", "json", "edgelist"), default="csv")
    common.add_argument("--out")
    common.add_argument("--tol-eig", type=float, default=eigen.OFF_TOL)
    common.add_argument("--tol-psd", type=float, default=PSD_TOL)
    common.add_argument("--tol-rank1", type=float, default=RANK1_TOL)

    parser = _Parser(prog="graphkernel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    helps = {
        "gen": "write a family instance or re-emit a graph file",
        "gram": "Gram matrix of the dipoles over F",
        "spec": "eigenvalues of the Gram matrix",
        "truncate": "u-basis data and rank-one check for F",
        "sweep": "eigen-extremes along an exhaustion",
        "dipole": "solve Lap v = delta_x - delta_y (or a --charge)",
        "green": "Laplacian of a kernel column with residual tables",
        "psdcheck": "least-eigenvalue PSD test",
        "criterion": "projected point-mass norms along an exhaustion",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    if ns.command is None:
        raise UsageError("a command is required")
    if ns.n is not None and ns.levels is not None and ns.n != ns.levels:
        raise UsageError("--n and --levels disagree")
    size = ns.n if ns.n is not None else ns.levels
    if size is not None and size < 1:
        raise UsageError("size must be >= 1")
    flags = {k: v for k, v in sorted(vars(ns).items())
             if v is not None and k not in ("command",)}
    if "points" in flags:
        flags["points"] = list(flags["points"])
    return RunConfig(command=ns.command, family=ns.family, graph_file=ns.graph, size=size,
                     base=ns.base, rule=ns.rule, K=ns.K, x=ns.x, y=ns.y, charge=ns.charge,
                     points=ns.points, radius=ns.radius, fmt=ns.fmt, out=ns.out,
                     tol_eig=ns.tol_eig, tol_psd=ns.tol_psd, tol_rank1=ns.tol_rank1,
                     flags=flags)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except GraphError as exc:
        _report(sys.stderr, "usage", argv[0] if argv else None, exc)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
