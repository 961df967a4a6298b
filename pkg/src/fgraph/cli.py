"""Command line front end: ``fgraph <command> [options]``.

Exit codes: 0 success, 1 mathematically negative or undetermined outcome
(the full report is still written), 2 usage, IO or budget errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from . import arrangements as arr
from . import confspaces, csm, feynman_lambda, hypersurfaces as hyp
from .corpus import connected_multigraphs
from .graphs import Multigraph, betti1, family
from .motive import IntPoly
from .pointcount import BudgetExceeded, NotPolynomialError, default_budget
from sympy import isprime

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph_source: dict | None
    primes: list[int] | None
    budget: int
    seed: int
    out: str | None
    jobs: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        if self.primes and not all(isprime(p) for p in self.primes):
            raise UsageError(f"not all of {self.primes} are prime")

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "graph_source": self.graph_source,
            "primes": self.primes,
            "budget": self.budget,
            "seed": self.seed,
            "options": self.options,
        }


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {s!r}") from None


def _load_graph(args) -> tuple[Multigraph, dict]:
    if args.graph and args.family:
        raise UsageError("give either --graph or --family, not both")
    if args.graph:
        try:
            with open(args.graph) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read graph file: {exc}") from None
        try:
            g = Multigraph.parse(text)
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot parse graph file {args.graph}: {exc}") from None
        return g, {"file": args.graph, "graph": g.to_json()}
    if args.family:
        if args.n is None:
            raise UsageError("--family needs --n")
        try:
            g = family(args.family, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return g, {"family": args.family, "n": args.n}
    raise UsageError("a graph is required: --graph FILE or --family NAME --n N")


def _class_json(c: IntPoly) -> dict:
    return {"L": c.to_basis("L").to_json(), "T": c.to_basis("T").to_json(), "text_T": str(c.to_basis("T"))}


# commands; each returns (status, payload)

def _auto_class(g: Multigraph, cfg: RunConfig) -> hyp.GraphClassReport:
    method = cfg.options.get("method", "auto")
    if method != "auto":
        return hyp.graph_classes(g, method, cfg.primes, cfg.budget)
    if hyp.class_via_closed_form(g) is not None:
        return hyp.graph_classes(g, "closed-form")
    rep = hyp.graph_classes(g, "delcon", cfg.primes, cfg.budget)
    if not rep.determined:
        try:
            alt = hyp.graph_classes(g, "counting", cfg.primes, cfg.budget)
        except BudgetExceeded:
            return rep
        if alt.determined:
            return alt
    return rep


def cmd_psi(g, cfg):
    psi = hyp.kirchhoff_polynomial(g)
    return "ok", {"graph": g.to_json(), "b1": betti1(g), "psi": psi.to_json()}


def cmd_class(g, cfg):
    rep = _auto_class(g, cfg)
    return ("ok" if rep.determined else "undetermined"), rep.to_json()


def cmd_chi(g, cfg):
    res = hyp.chi_theorems_check(g, cfg.budget)
    return ("ok" if all(c["holds"] for c in res["checks"]) else "negative"), res


def cmd_check_f1(g, cfg):
    rep = _auto_class(g, cfg)
    if not rep.determined:
        return "undetermined", rep.to_json()
    chosen = cfg.options.get("varieties", ["X"])
    entries = rep.f1_verdict.entries
    passes = all(entries[v]["chi_ok"] and entries[v]["T_nonnegative"] for v in chosen)
    payload = rep.to_json()
    payload["checked_varieties"] = chosen
    payload["checked_passes"] = passes
    return ("ok" if passes else "negative"), payload


def _scan_one(args):
    g_json, primes, budget = args
    g = Multigraph.from_json(g_json)
    rep = hyp.graph_classes(g, "delcon", primes, budget)
    return g_json, (rep.chi_Y if rep.determined else None), (None if rep.determined else str(rep.affine_class))


def cmd_scan(g, cfg):
    max_edges = cfg.options.get("max_edges", 6)
    graphs = [h for h in connected_multigraphs(max_edges) if betti1(h) > 0]
    forests: dict[str, int] = {}
    for h in connected_multigraphs(max_edges):
        if betti1(h) == 0:
            forests[str(h.n_edges)] = forests.get(str(h.n_edges), 0) + 1
    work = [(h.to_json(), cfg.primes, cfg.budget) for h in graphs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            rows = list(ex.map(_scan_one, work, chunksize=8))
    else:
        rows = [_scan_one(w) for w in work]
    hist: dict[int, int] = {}
    exceptions, undetermined = [], []
    for gj, chi, why in rows:
        if chi is None:
            undetermined.append({"graph": gj, "reason": why})
            continue
        hist[chi] = hist.get(chi, 0) + 1
        if chi not in (-1, 0, 1):
            exceptions.append({"graph": gj, "chi_Y": chi})
    return "ok", {
        "max_edges": max_edges,
        "graphs": len(graphs),
        "forests_by_edge_count": forests,
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "exceptions": exceptions,
        "undetermined": undetermined,
    }


def cmd_arrangement(g, cfg):
    if cfg.options.get("normals_file"):
        path = cfg.options["normals_file"]
        try:
            with open(path) as fh:
                a = arr.Arrangement.from_json(json.load(fh))
        except OSError as exc:
            raise UsageError(f"cannot read arrangement file: {exc}") from None
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot parse arrangement file {path}: {exc}") from None
    else:
        if g is None:
            raise UsageError("arrangement needs --normals FILE or a graph")
        try:
            a = arr.graph_arrangement(g)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    poset = arr.intersection_poset(a)
    chk = arr.mobius_condition_check(a, poset)
    payload = {
        "arrangement": a.to_json(),
        "poset": poset.to_json(),
        "characteristic_polynomial": str(arr.characteristic_polynomial(a, poset)),
        "complement_class": _class_json(arr.complement_class(a, poset)),
        "union_class": _class_json(arr.union_class(a, poset)),
        "mobius_check": chk,
    }
    ok = chk["mobius_passes"] and chk["agree"]
    oracle = cfg.options.get("oracle_primes") or []
    if oracle:
        comp = arr.complement_class(a, poset)
        stable = arr.matroid_stable_mod(a, oracle)
        rows = {str(q): {"class": comp(q), "count": arr.complement_count_projective(a, q)} for q in oracle}
        payload["oracle"] = {"matroid_stable": stable, "values": rows,
                             "matches": all(r["class"] == r["count"] for r in rows.values())}
        ok = ok and (payload["oracle"]["matches"] or not stable)
    return ("ok" if ok else "negative"), payload


def cmd_lambda(g, cfg):
    if betti1(g) == 0:
        raise UsageError("Lambda needs a graph with b1 >= 1")
    rep = feynman_lambda.lambda_report(g, cfg.options.get("oracle_primes") or (), cfg.budget)
    payload = rep.to_json()
    ok = payload["f1_verdict"]["passes"] and payload.get("oracle_matches_class", True)
    ok = ok and rep.strata_chi_sum == betti1(g)
    return ("ok" if ok else "negative"), payload


def cmd_conf(g, cfg):
    D = cfg.options.get("dim", 1)
    try:
        payload = confspaces.conf_report(g, D, cfg.options.get("oracle", False))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = payload["T_nonnegative"] and payload["euler_from_class"] == payload["euler_formula"]
    if "oracle" in payload:
        ok = ok and payload["oracle"]["matches"]
    return ("ok" if ok else "negative"), payload


def cmd_csm(g, cfg):
    seeds = tuple(cfg.seed + k for k in range(5))
    payload = csm.feynman_rule_checks(g, "polar", cfg.budget)
    psi = hyp.kirchhoff_polynomial(g)
    try:
        qd, info = csm.q_deformed_class([psi], g.n_edges, cfg.options.get("q") or (), seeds, budget=cfg.budget)
        payload["counting"] = {"countable": True, "q_deformed": qd.to_json(), **info,
                               "matches_polar": qd.limit() == csm.g_from_chi(csm.ChiProfile(payload["profile"]["chis"]))}
    except (NotPolynomialError, csm.DrawsDisagree, BudgetExceeded) as exc:
        payload["counting"] = {"countable": False, "reason": str(exc)}
    ok = payload.get("C_prime_0_holds", False) and payload.get("chi01_holds", False) and payload["monic_degree_n"]
    ok = ok and payload["embedded_f1"]["passes"]
    return ("ok" if ok else "negative"), payload


def cmd_corpus(g, cfg):
    max_edges = cfg.options.get("max_edges", 3)
    try:
        gs = [h.to_json() for h in connected_multigraphs(max_edges)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return "ok", {"max_edges": max_edges, "count": len(gs), "graphs": gs, "duplicates_flagged": 0}


COMMANDS: dict[str, tuple[Callable, bool]] = {
    "psi": (cmd_psi, True),
    "class": (cmd_class, True),
    "chi": (cmd_chi, True),
    "check-f1": (cmd_check_f1, True),
    "scan": (cmd_scan, False),
    "arrangement": (cmd_arrangement, False),
    "lambda": (cmd_lambda, True),
    "conf": (cmd_conf, True),
    "csm": (cmd_csm, True),
    "corpus": (cmd_corpus, False),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (text 'V E' format or JSON)")
    common.add_argument("--family", help="named family: banana, cycle, lemon, path, complete, wheel")
    common.add_argument("--n", type=int, help="family parameter")
    common.add_argument("--primes", type=_int_list, help="comma separated primes for point counts")
    common.add_argument("--budget", type=int, default=None, help="evaluation budget (default $FGRAPH_BUDGET or 1e8)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for corpus-wide commands")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = argparse.ArgumentParser(prog="fgraph", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fgraph {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("psi", parents=[common], help="Kirchhoff polynomial")
    s = sub.add_parser("class", parents=[common], help="Grothendieck classes")
    s.add_argument("--method", choices=["auto", "delcon", "counting", "closed-form"], default="auto")
    sub.add_parser("chi", parents=[common], help="Euler characteristic statements")
    s = sub.add_parser("check-f1", parents=[common], help="F1 necessary conditions")
    s.add_argument("--method", choices=["auto", "delcon", "counting", "closed-form"], default="auto")
    s.add_argument("--variety", action="append", choices=["X", "Y", "X_hat", "Y_hat"],
                   help="varieties whose verdict sets the exit code (default X; repeatable)")
    s = sub.add_parser("scan", parents=[common], help="chi(Y) over all connected graphs")
    s.add_argument("--max-edges", type=int, default=6)
    s = sub.add_parser("arrangement", parents=[common], help="hyperplane arrangement invariants")
    s.add_argument("--normals", help="arrangement JSON file")
    s.add_argument("--oracle-primes", type=_int_list)
    s = sub.add_parser("lambda", parents=[common], help="class of Lambda_G")
    s.add_argument("--oracle-primes", type=_int_list)
    s = sub.add_parser("conf", parents=[common], help="wonderful compactification class")
    s.add_argument("--dim", type=int, default=1)
    s.add_argument("--oracle", action="store_true")
    s = sub.add_parser("csm", parents=[common], help="CSM invariants and C_G(T)")
    s.add_argument("--q", type=_int_list)
    s = sub.add_parser("corpus", parents=[common], help="list connected multigraphs")
    s.add_argument("--max-edges", type=int, default=3)
    return p


def _options(args) -> dict:
    opts = {}
    for name in ("method", "max_edges", "oracle_primes", "dim", "oracle", "q"):
        if hasattr(args, name) and getattr(args, name) is not None:
            opts[name] = getattr(args, name)
    if getattr(args, "normals", None):
        opts["normals_file"] = args.normals
    if args.command == "check-f1":
        opts["varieties"] = args.variety or ["X"]
    return opts


def run(argv: Sequence[str] | None = None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), None
    t0 = time.perf_counter()
    try:
        cfg = RunConfig(args.command, None, args.primes,
                        args.budget if args.budget is not None else default_budget(),
                        args.seed, args.out, max(1, args.jobs), _options(args))
        func, needs_graph = COMMANDS[args.command]
        g = None
        if needs_graph or args.graph or args.family:
            g, cfg.graph_source = _load_graph(args)
        status, payload = func(g, cfg)
    except UsageError as exc:
        print(f"fgraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except BudgetExceeded as exc:
        print(f"fgraph: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except NotPolynomialError as exc:
        status, payload = "undetermined", {"error": str(exc)}
    report = {
        "tool": "fgraph",
        "version": __version__,
        "config": cfg.to_json(),
        "status": status,
        "result": payload,
    }
    if args.timings:
        report["timings"] = {"wall_seconds": round(time.perf_counter() - t0, 6)}
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"fgraph: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE, report
    else:
        sys.stdout.write(text)
    return (EXIT_OK if status == "ok" else EXIT_NEGATIVE), report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
