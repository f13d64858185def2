"""Command-line interface.

Exit codes: 0 success / found / valid, 1 honest negative (not found, invalid,
hypothesis fails), 2 usage or parse error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from collections import Counter
from functools import partial
from itertools import combinations
from pathlib import Path

from . import abfinder, bihamilton, fklab, hypergraph, oracle
from .hypergraph import ParseError, ProductHypergraph, degree, min_degree
from .sampling import derive_seed

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write_text(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _plot_script(csv_path: str, xcol: int, ycols: list[tuple[int, str]], xlabel: str, ylabel: str,
                 logy: bool = False) -> str:
    plots = ", ".join(f"'{csv_path}' using {xcol}:{c} with linespoints title '{t}'" for c, t in ycols)
    return "\n".join([
        "# gnuplot script",
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set logscale y" if logy else "unset logscale y",
        "set terminal pngcairo size 800,600",
        f"set output '{Path(csv_path).with_suffix('.png').name}'",
        f"plot {plots}",
        "",
    ])


def _emit_csv(args, header, rows, plot=None) -> None:
    text = _csv_text(header, rows)
    _write_text(text, args.out)
    if plot is not None and args.out not in (None, "-"):
        Path(args.out).with_suffix(".gp").write_text(plot(args.out))


def _load_hypergraph(path: str):
    try:
        return hypergraph.load_uhg(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_degrees(args) -> int:
    H = _load_hypergraph(args.file)
    if not 1 <= args.d <= H.k:
        raise UsageError(f"d must lie in [1, {H.k}]")
    hist = Counter(degree(H, S) for S in combinations(range(1, H.n + 1), args.d))
    print(f"min_degree={min_degree(H, args.d)}")
    print(f"max_degree={max(hist)}")
    print(f"complete_degree={hypergraph.binom(H.n - args.d, H.k - args.d)}")
    print("histogram=" + " ".join(f"{v}:{c}" for v, c in sorted(hist.items())))
    return EXIT_OK


def cmd_check(args) -> int:
    H = _load_hypergraph(args.file)
    if isinstance(H, ProductHypergraph):
        r = hypergraph.check_main2_hypothesis(H, args.alpha)
    else:
        r = hypergraph.check_main1_hypothesis(H, args.a, args.alpha)
    for name in ("alpha", "error_term", "required_delta_a", "required_delta_b",
                 "actual_delta_a", "actual_delta_b", "hypothesis_holds", "margins"):
        print(f"{name}={getattr(r, name)}")
    return EXIT_OK if r.hypothesis_holds else EXIT_NEGATIVE


def cmd_find(args) -> int:
    H = _load_hypergraph(args.file)
    if isinstance(H, ProductHypergraph):
        res = abfinder.find_in_product(H, args.attempts, args.seed)
    else:
        if args.a is None or args.b is None:
            raise UsageError("find needs -a and -b for plain hypergraphs")
        res = abfinder.find_ab_cycle(H, args.a, args.b, args.attempts, args.seed)
    header = list(abfinder.RunReport.CSV_COLUMNS)
    row = res.report.csv_row()
    if args.timing:
        header.append("elapsed_ms")
        row.append(f"{1000 * sum(res.report.elapsed.values()):.3f}")
    sys.stdout.write(_csv_text(header, [row]))
    if res.found:
        text = abfinder.format_cert(res.cert)
        if args.out:
            _write_text(text, args.out)
        else:
            sys.stderr.write(text)
        return EXIT_OK
    print(f"no Hamilton ({res.report.attempts} attempts exhausted)", file=sys.stderr)
    return EXIT_NEGATIVE


def cmd_verify(args) -> int:
    H = _load_hypergraph(args.hypergraph)
    try:
        cert = abfinder.load_cert(args.cert)
    except OSError as exc:
        raise UsageError(f"cannot read {args.cert}: {exc}") from exc
    problems = abfinder.verify_ab_cycle(H, cert)
    if not problems:
        print("valid")
        return EXIT_OK
    print("invalid")
    for p in problems:
        print(p)
    return EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    H = _load_hypergraph(args.file)
    try:
        res = oracle.exhaustive_ab_cycle(H, args.a, args.b, node_budget=args.budget)
    except bihamilton.BudgetExceeded as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"exists={str(res.exists).lower()} nodes={res.nodes_explored}", file=sys.stderr)
    if res.exists:
        _write_text(abfinder.format_cert(res.cert), args.out)
        return EXIT_OK
    return EXIT_NEGATIVE


def cmd_gen(args) -> int:
    kind, p = args.kind, args.params
    try:
        if kind == "complete":
            n, k = map(int, p)
            H = oracle.complete_hypergraph(n, k)
        elif kind == "random":
            n, k, prob = int(p[0]), int(p[1]), float(p[2])
            H = oracle.random_hypergraph(n, k, prob, args.seed)
        elif kind == "parity":
            n, k = int(p[0]), int(p[1])
            D = [int(v) for v in p[2].split(",") if v]
            H = oracle.parity_family(n, k, D, p[3] if len(p) > 3 else "even")
        elif kind == "planted":
            n, a, b = map(int, p)
            H, cert = oracle.planted_cycle(n, a, b, args.seed)
            if args.cert:
                abfinder.save_cert(cert, args.cert)
        elif kind == "product":
            n1, n2, a, b = map(int, p[:4])
            prob = float(p[4]) if len(p) > 4 else 1.0
            H = oracle.random_product(n1, n2, a, b, prob, args.seed)
        else:
            raise UsageError(f"unknown generator {kind!r}")
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad parameters for {kind}: {exc}") from exc
    _write_text(hypergraph.format_uhg(H), args.out)
    return EXIT_OK


def _gammas(text: str) -> list[float]:
    return [float(g) for g in text.split(",") if g]


def cmd_fk(args) -> int:
    inst = fklab.make_instance(args.m, args.l, args.t, args.theta, args.seed)
    gammas = _gammas(args.gammas)
    st = fklab.run_fk(inst, gammas, args.trials, args.seed, args.jobs)
    rows = [[_fmt(g), _fmt(st.tail_freq[g]), _fmt(st.bound[g]), st.trials, args.seed,
             _fmt(inst.theta), _fmt(st.mean_eta), _fmt(st.expected_eta)] for g in gammas]
    _emit_csv(args, ["gamma", "empirical_tail", "bound", "trials", "seed",
                     "theta", "mean_eta", "expected_eta"], rows,
              partial(_plot_script, xcol=1, ycols=[(2, "empirical"), (3, "bound")],
                      xlabel="gamma", ylabel="Pr[|eta - theta t| >= 2 gamma sqrt t]", logy=True))
    print(f"theta={inst.theta:.6f} mean_eta={st.mean_eta:.6f} expected={st.expected_eta:.6f}",
          file=sys.stderr)
    return EXIT_OK


def cmd_linkconc(args) -> int:
    H = _load_hypergraph(args.file)
    gammas = _gammas(args.gammas)
    fixed = [int(v) for v in args.fixed.split(",")] if args.fixed else None
    st = fklab.link_concentration_experiment(
        H, args.a, args.alpha, args.trials, args.seed, fixed=fixed, side=args.side,
        gammas=gammas, jobs=args.jobs,
    )
    ev = st.events
    rows = [[_fmt(g), _fmt(st.tail_freq[g]), _fmt(st.bound[g]), st.trials, args.seed,
             _fmt(ev["alpha_fixed"]), _fmt(st.mean_eta), _fmt(ev["deviation"]),
             _fmt(ev["deviation_bound"]), _fmt(ev["below_alpha"])] for g in gammas]
    _emit_csv(args, ["gamma", "empirical_tail", "bound", "trials", "seed", "alpha_fixed",
                     "mean_eta", "deviation_freq", "deviation_bound", "below_alpha_freq"], rows,
              partial(_plot_script, xcol=1, ycols=[(2, "empirical"), (3, "bound")],
                      xlabel="gamma", ylabel="tail frequency", logy=True))
    return EXIT_OK


def cmd_oresucc(args) -> int:
    H = _load_hypergraph(args.file)
    st = abfinder.ore_success_probability(H, args.a, args.b, args.alpha, args.trials, args.seed,
                                          args.jobs)
    header = ["master_seed", "trial_index", "min_row_degree", "min_col_degree", "degree_ok", "ore_ok"]
    rows = [[args.seed, r.trial_index, r.min_row_degree, r.min_col_degree, int(r.degree_ok),
             int(r.ore_ok)] for r in sorted(st.records, key=lambda r: r.trial_index)]
    _emit_csv(args, header, rows,
              partial(_plot_script, xcol=2, ycols=[(3, "min row degree"), (4, "min column degree")],
                      xlabel="trial", ylabel="degree"))
    print(f"degree_freq={st.events['degree']:.6f} ore_freq={st.events['ore']:.6f}", file=sys.stderr)
    return EXIT_OK


def _sweep_trial(n, k, a, b, p, pi, seed, attempts, use_oracle, trial):
    t0 = time.perf_counter()
    H = oracle.random_hypergraph(n, k, p, derive_seed(seed, trial, pi))
    res = abfinder.find_ab_cycle(H, a, b, attempts, seed=seed + trial)
    ex = None
    if use_oracle:
        ex = res.found or oracle.exhaustive_ab_cycle(H, a, b).exists
    return res.found, ex, 1000 * (time.perf_counter() - t0)


def cmd_sweep(args) -> int:
    grid = [float(p) for p in args.p_grid.split(",") if p]
    use_oracle = args.n <= 12
    header = ["p", "trials", "finder_success_rate", "oracle_exists_rate", "master_seed"]
    if args.timing:
        header.append("elapsed_ms")
    rows = []
    for pi, p in enumerate(grid):
        fn = partial(_sweep_trial, args.n, args.k, args.a, args.b, p, pi, args.seed,
                     args.attempts, use_oracle)
        res = fklab.parallel_map(fn, range(args.trials), args.jobs)
        succ = sum(r[0] for r in res) / args.trials
        ex = _fmt(sum(r[1] for r in res) / args.trials) if use_oracle else ""
        row = [_fmt(p), args.trials, _fmt(succ), ex, args.seed]
        if args.timing:
            row.append(f"{sum(r[2] for r in res):.3f}")
        rows.append(row)
    _emit_csv(args, header, rows,
              partial(_plot_script, xcol=1, ycols=[(3, "finder"), (4, "oracle")],
                      xlabel="edge density p", ylabel="rate"))
    return EXIT_OK


def _load_adjacency(path):
    try:
        return bihamilton.parse_adjacency(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_biham(args) -> int:
    G = _load_adjacency(args.file)
    if args.exact:
        try:
            cyc = bihamilton.exact_hamilton(G, args.budget)
        except bihamilton.BudgetExceeded as exc:
            print(f"unknown: {exc}", file=sys.stderr)
            return EXIT_BUDGET
    else:
        cyc = bihamilton.find_hamilton(G)
    if cyc is None:
        print("no hamilton cycle found")
        return EXIT_NEGATIVE
    print(" ".join(f"{s}{i}" for s, i in cyc.order))
    return EXIT_OK


def cmd_orecheck(args) -> int:
    G = _load_adjacency(args.file)
    r = bihamilton.ore_check(G)
    if r.holds:
        print("holds")
        return EXIT_OK
    i, j = r.witness
    print(f"violated x{i} y{j} degree_sum={r.witness_sum} t={G.t}")
    return EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abcycle", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True, out=True, trials=False, jobs=False):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if out:
            p.add_argument("--out", default=None)
        if trials:
            p.add_argument("--trials", type=int, default=1000)
        if jobs:
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("degrees", help="minimum d-degree and degree histogram")
    p.add_argument("file")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("check", help="evaluate the degree hypothesis")
    p.add_argument("file")
    p.add_argument("-a", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find", help="Las Vegas search for a Hamilton (a,b)-cycle")
    p.add_argument("file")
    p.add_argument("-a", type=int)
    p.add_argument("-b", type=int)
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--timing", action="store_true")
    common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("verify", help="check a certificate against a hypergraph")
    p.add_argument("hypergraph")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive search (small n)")
    p.add_argument("file")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000_000)
    common(p, seed=False)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated hypergraph (.uhg)")
    p.add_argument("kind", choices=["complete", "random", "parity", "planted", "product"])
    p.add_argument("params", nargs="*",
                   help="complete: n k | random: n k p | parity: n k D[,..] [even|odd] | "
                        "planted: n a b | product: n1 n2 a b [p]")
    p.add_argument("--cert", default=None, help="planted: also write the planted certificate")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fk", help="concentration of |G n M| for a random matching M")
    p.add_argument("--m", type=int, default=60)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--t", type=int, default=20)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--gammas", default="0.5,1,1.5,2,2.5")
    common(p, trials=True, jobs=True)
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("linkconc", help="row-degree concentration in the auxiliary graph")
    p.add_argument("file")
    p.add_argument("-a", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--side", choices=["A", "B"], default="A")
    p.add_argument("--fixed", default=None, help="comma-separated fixed block (default 1..a)")
    p.add_argument("--gammas", default="0.5,1,1.5,2,2.5")
    common(p, trials=True, jobs=True)
    p.set_defaults(func=cmd_linkconc)

    p = sub.add_parser("oresucc", help="frequency of the degree and Moon-Moser events")
    p.add_argument("file")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    common(p, trials=True, jobs=True)
    p.set_defaults(func=cmd_oresucc)

    p = sub.add_parser("sweep", help="finder success vs oracle existence across densities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("--p-grid", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--timing", action="store_true")
    common(p, trials=True, jobs=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("biham", help="Hamilton cycle of a bipartite adjacency file")
    p.add_argument("file")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=cmd_biham)

    p = sub.add_parser("orecheck", help="Moon-Moser degree condition")
    p.add_argument("file")
    p.set_defaults(func=cmd_orecheck)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
