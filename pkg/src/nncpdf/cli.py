"""Command-line front end: evaluate bounds, check feasibility, compare
specializations, optimize schemes, and run the symbolic derivation
pipeline.  Emits human-readable tables or stable sorted CSV."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import (
    cutset_max_grid,
    ddf_bound,
    feasibility_check,
    induced_input_dist,
    is_feasible,
    nnc_bound,
    nncpdf_bound,
    theorem7_bound,
)
from .derivation import (
    BlockLayout,
    atom_values,
    build_unfolded_joint,
    derive_p2p_region,
    derive_region,
    derive_symbolic_families,
    evaluate_unfolded_atom,
    generate_constraints,
    simplify_info_term,
)
from .errors import NncpdfError
from .network import (
    Network,
    load_network_file,
    load_scheme_file,
    make_ddf_scheme,
    make_nnc_scheme,
    scheme_to_document,
)
from .omega import build_nncpdf_omega
from .optimize import SearchConfig, optimize
from .probability import mutual_information
from .symbolic import evaluate_region


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus shared options."""

    command: str
    network: str | None = None
    scheme: str | None = None
    dest: int | None = None
    complement: str = "all"
    perm: tuple[int, ...] | None = None
    fmt: str = "table"
    out: str | None = None
    seed: int = 0
    grid_res: int = 3
    aux_sizes: tuple[int, int, int] | None = None
    method: str = "grid"
    preset: str = "nncpdf"
    n: int = 3


def _fmt_set(s) -> str:
    return ";".join(str(k) for k in sorted(s)) if s else "-"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _num(x: float) -> str:
    return f"{x:.12g}"


def _load_pair(cfg: RunConfig):
    if not cfg.network or not cfg.scheme:
        raise NncpdfError("this subcommand needs --network and --scheme")
    net = load_network_file(cfg.network)
    scheme = load_scheme_file(cfg.scheme, net.N)
    return net, scheme


def _cmd_eval(cfg: RunConfig) -> str:
    net, scheme = _load_pair(cfg)
    report = nncpdf_bound(net, scheme, complement=cfg.complement, perm=cfg.perm)
    cuts = [
        c
        for c in report.cuts
        if cfg.dest is None or c.cut.d == cfg.dest
    ]
    cuts.sort(key=lambda c: (c.cut.d, sorted(c.cut.S), sorted(c.cut.T)))
    bound = (
        report.per_destination[cfg.dest] if cfg.dest is not None else report.bound
    )
    if cfg.fmt == "csv":
        rows = [["record", "destination", "S", "T",
                 "term1", "term2", "term3", "term4", "value"]]
        for c in cuts:
            rows.append(
                ["cut", c.cut.d, _fmt_set(c.cut.S), _fmt_set(c.cut.T)]
                + [_num(t) for t in c.terms]
                + [_num(c.total)]
            )
        rows.append(["bound", "", "", "", "", "", "", "", _num(bound)])
        rows.append(["feasible", "", "", "", "", "", "", "",
                     str(report.feasible).lower()])
        return _csv(rows)
    lines = [f"{'d':>3} {'S':>8} {'T':>8} {'term1':>12} {'term2':>12} "
             f"{'term3':>12} {'term4':>12} {'value':>12}"]
    for c in cuts:
        t = c.terms
        lines.append(
            f"{c.cut.d:>3} {_fmt_set(c.cut.S):>8} {_fmt_set(c.cut.T):>8} "
            f"{t[0]:>12.6f} {t[1]:>12.6f} {t[2]:>12.6f} {t[3]:>12.6f} "
            f"{c.total:>12.6f}"
        )
    lines.append(f"bound: {_num(bound)}")
    lines.append(f"feasible: {report.feasible}")
    return "\n".join(lines) + "\n"


def _cmd_feasibility(cfg: RunConfig) -> str:
    net, scheme = _load_pair(cfg)
    entries = feasibility_check(net, scheme, perm=cfg.perm)
    entries.sort(key=lambda e: (len(e.nodes), e.nodes))
    if cfg.fmt == "csv":
        rows = [["nodes", "lhs", "rhs", "margin"]]
        for e in entries:
            rows.append([_fmt_set(e.nodes), _num(e.lhs), _num(e.rhs),
                         _num(e.margin)])
        rows.append(["feasible", "", "", str(is_feasible(entries)).lower()])
        return _csv(rows)
    lines = [f"{'nodes':>8} {'lhs':>12} {'rhs':>12} {'margin':>12}"]
    for e in entries:
        lines.append(
            f"{_fmt_set(e.nodes):>8} {e.lhs:>12.6f} {e.rhs:>12.6f} "
            f"{e.margin:>12.6f}"
        )
    lines.append(f"feasible: {is_feasible(entries)}")
    return "\n".join(lines) + "\n"


def _cmd_compare(cfg: RunConfig) -> str:
    net, scheme = _load_pair(cfg)
    rows = []
    rep = nncpdf_bound(net, scheme, complement=cfg.complement, perm=cfg.perm)
    rows.append(("nncpdf", rep.bound if rep.feasible else float("-inf")))
    rows.append(("nnc", nnc_bound(net, make_nnc_scheme(scheme), perm=cfg.perm)))
    rows.append(("ddf", ddf_bound(net, make_ddf_scheme(scheme), perm=cfg.perm)))
    if net.N == 3:
        rows.append(("theorem7", theorem7_bound(net, scheme)))
    rows.append(
        (
            "cutset",
            cutset_max_grid(
                net, cfg.grid_res,
                extra_points=[induced_input_dist(net, scheme).reshape(-1)],
            ),
        )
    )
    if cfg.fmt == "csv":
        return _csv([["method", "rate"]] + [[m, _num(v)] for m, v in rows])
    return "\n".join(f"{m:>10}: {_num(v)}" for m, v in rows) + "\n"


def _cmd_optimize(cfg: RunConfig) -> str:
    if not cfg.network:
        raise NncpdfError("optimize needs --network")
    net = load_network_file(cfg.network)
    n_rel = net.N - 1
    if cfg.aux_sizes:
        v, u, yh = cfg.aux_sizes
        sizes = dict(
            v_sizes=(v,) * n_rel, u_sizes=(u,) * n_rel, yhat_sizes=(yh,) * n_rel
        )
    else:
        sizes = {}
    scfg = SearchConfig(
        method=cfg.method, resolution=cfg.grid_res, seed=cfg.seed, **sizes
    )
    init = load_scheme_file(cfg.scheme, net.N) if cfg.scheme else None
    scheme, rate, trace = optimize(net, scfg, init)
    doc = scheme_to_document(scheme)
    doc = json.loads(json.dumps(doc), parse_float=lambda s: float(f"{float(s):.12g}"))
    payload = json.dumps({"rate": float(f"{rate:.12g}"), "scheme": doc}, indent=2)
    sys.stdout.write(f"rate: {_num(rate)}\ntrace: {[_num(r) for r in trace]}\n")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        sys.stdout.write(payload + "\n")
    return ""


def _cmd_derive(cfg: RunConfig) -> str:
    lines = []
    if cfg.preset == "p2p":
        region = derive_p2p_region()
        lines.append("projected region:")
        lines.append(str(region))
    else:
        if cfg.network:
            net = load_network_file(cfg.network)
        else:
            n = cfg.n
            uniform = np.ones((2,) * n + (2,) * n) / (2 ** n)
            net = Network(n, (2,) * n, (2,) * n, uniform,
                          frozenset(range(2, n + 1)))
        families = derive_symbolic_families(net)
        lines.append("constraint families (B symbolic):")
        for key in sorted(families, key=str):
            lines.append(f"  {key}: {families[key].inequality}")
        region = derive_region(net)
        lines.append("projected region:")
        for ineq in region.inequalities:
            lines.append(f"  {ineq}")
        if cfg.network and cfg.scheme:
            scheme = load_scheme_file(cfg.scheme, net.N)
            value = evaluate_region(region, atom_values(net, scheme,
                                                        region.atom_table))
            rep = nncpdf_bound(net, scheme)
            lines.append(f"region value: {_num(value)}")
            lines.append(f"direct bound: {_num(rep.bound)}")
            lines.append(f"delta: {_num(abs(value - rep.bound))}")
    return "\n".join(lines) + "\n"


def _cmd_simplify_check(cfg: RunConfig) -> str:
    net, scheme = _load_pair(cfg)
    b = 2
    omega = build_nncpdf_omega(net, b)
    layout = BlockLayout(message_rate_blocks=b)
    unfolded = build_unfolded_joint(net, scheme, b)
    from .network import assemble_joint

    single = assemble_joint(net, scheme)
    rows = []
    for k in net.relays():
        for node in ((k, 1), (k, 2)):
            for c in generate_constraints(omega, node):
                for name, atom in sorted(c.atom_table.items()):
                    direct = evaluate_unfolded_atom(unfolded, atom)
                    coeffs, table = simplify_info_term(atom, layout)
                    recon = sum(
                        float(m) * mutual_information(single, table[nm])
                        for nm, m in coeffs.items()
                    )
                    rows.append((name, direct, recon, abs(direct - recon)))
    rows.sort(key=lambda r: r[0])
    if cfg.fmt == "csv":
        out = [["atom", "direct", "reconstructed", "delta"]]
        out += [[n, _num(d), _num(r), _num(e)] for n, d, r, e in rows]
        return _csv(out)
    lines = [f"{'delta':>12}  atom"]
    for n, d, r, e in rows:
        lines.append(f"{e:>12.3e}  {n}")
    lines.append(f"max delta: {max((r[3] for r in rows), default=0.0):.3e}")
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "eval": _cmd_eval,
    "feasibility": _cmd_feasibility,
    "compare": _cmd_compare,
    "optimize": _cmd_optimize,
    "derive": _cmd_derive,
    "simplify-check": _cmd_simplify_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nncpdf",
        description="Achievable-rate bounds for finite-alphabet relay networks",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--network")
        sp.add_argument("--scheme")
        sp.add_argument("--dest", type=int)
        sp.add_argument("--complement", choices=("relays", "all"), default="all")
        sp.add_argument("--perm")
        sp.add_argument("--format", dest="fmt", choices=("table", "csv"),
                        default="table")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--grid-res", type=int, default=3)
        sp.add_argument("--aux-sizes")
        if name == "optimize":
            sp.add_argument("--method", choices=("grid", "coordinate-ascent"),
                            default="grid")
        if name == "derive":
            sp.add_argument("--preset", choices=("nncpdf", "p2p"),
                            default="nncpdf")
            sp.add_argument("--N", dest="n", type=int, default=3)
    return p


def config_from_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    perm = None
    if ns.perm:
        perm = tuple(int(x) for x in ns.perm.split(","))
    aux = None
    if ns.aux_sizes:
        parts = [int(x) for x in ns.aux_sizes.split(",")]
        if len(parts) != 3:
            raise NncpdfError("--aux-sizes takes three integers: v,u,yhat")
        aux = tuple(parts)
    return RunConfig(
        command=ns.command,
        network=ns.network,
        scheme=ns.scheme,
        dest=ns.dest,
        complement=ns.complement,
        perm=perm,
        fmt=ns.fmt,
        out=ns.out,
        seed=ns.seed,
        grid_res=ns.grid_res,
        aux_sizes=aux,
        method=getattr(ns, "method", "grid"),
        preset=getattr(ns, "preset", "nncpdf"),
        n=getattr(ns, "n", 3),
    )


def run(cfg: RunConfig) -> int:
    try:
        text = _COMMANDS[cfg.command](cfg)
    except (NncpdfError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if text:
        _emit(cfg, text)
    return 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except NncpdfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
