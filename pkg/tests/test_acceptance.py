"""Acceptance criteria 1-9, at zero tolerance.  Each test prints one PASS/FAIL line."""

import random
import time
from itertools import combinations, combinations_with_replacement

import pytest

from fgraph.arrangements import (
    Arrangement, complement_class, complement_count_projective, graph_arrangement, matroid_stable_mod,
    mobius_condition_check, random_arrangement,
)
from fgraph.cli import run
from fgraph.confspaces import blowup_oracle, conf_class, conf_euler
from fgraph.corpus import connected_multigraphs
from fgraph.csm import (
    DrawsDisagree, c_gamma, chi_from_g, chi_profile_by_polar_degrees, csm_poly, feynman_rule_checks, g_from_chi,
    q_deformed_class,
)
from fgraph.feynman_lambda import lambda_class, lambda_oracle_count, lambda_report
from fgraph.graphs import (
    Multigraph, banana, betti1, canonical_form, classify_edge, cycle, disjoint_union, path,
)
from fgraph.hypersurfaces import (
    chi_theorems_check, class_via_closed_form, class_via_counting, class_via_delcon, graph_classes,
    kirchhoff_polynomial, vanishing_order_check,
)
from fgraph.motive import euler_characteristic
from fgraph.pointcount import NotPolynomialError

BANANA15 = [14, 106, 454, 1366, 3002, 5006, 6434, 6436, 5004, 3004, 1364, 456, 104, 1]


def verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def test_criterion_1_banana_closed_form(report_line, capsys):
    t0 = time.perf_counter()
    code, rep = run(["class", "--family", "banana", "--n", "15"])
    dt = time.perf_counter() - t0
    capsys.readouterr()
    coeffs = [int(c) for c in rep["result"]["projective_class"]["T"]["coeffs"]]
    ok = code == 0 and coeffs == BANANA15 and dt < 1
    report_line(f"criterion 1 {verdict(ok)}: banana n=15 T-coefficients {coeffs} in {dt:.3f}s (limit 1s)")
    assert ok


def test_criterion_2_triple_agreement(report_line):
    t0 = time.perf_counter()
    graphs = list(connected_multigraphs(5))
    bad, closed = [], 0
    for g in graphs:
        d = class_via_delcon(g)
        c, _ = class_via_counting(g, primes=[2, 3, 5, 7, 11, 13])
        cf = class_via_closed_form(g)
        closed += cf is not None
        if d != c or (cf is not None and cf != d):
            bad.append(g.to_text())
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    report_line(f"criterion 2 {verdict(ok)}: {len(graphs)} graphs, {closed} with a closed form, "
                f"{len(bad)} disagreements in {dt:.1f}s (limit 120s)")
    assert ok, bad


def _two_triangles_bridge():
    t = disjoint_union(cycle(3), cycle(3))
    return Multigraph(6, t.edges + ((0, 3),))


def test_criterion_3_euler_characteristic_statements(report_line):
    t0 = time.perf_counter()
    graphs = [g for g in connected_multigraphs(5) if betti1(g) >= 1] + [_two_triangles_bridge()]
    graphs += [banana(6)]
    tallies = {s: [0, 0] for s in ("b1_one", "bridge_or_loop", "banana")}
    literal_counterexamples, corrected = [], [0, 0]
    for g in graphs:
        res = chi_theorems_check(g)
        for c in res["checks"]:
            if c["statement"] not in tallies:
                continue
            tallies[c["statement"]][0] += c["holds"]
            tallies[c["statement"]][1] += 1
            if c["statement"] == "bridge_or_loop":
                if not c["holds"] and len(literal_counterexamples) < 3:
                    literal_counterexamples.append(f"{g.to_text()!r} chi={c['computed']}")
                if c["cycles_on_both_sides"]:
                    corrected[0] += c["holds"]
                    corrected[1] += 1
    dt = time.perf_counter() - t0
    ok = all(h == n for h, n in tallies.values()) and dt < 60 and tallies["banana"][1] == 4
    parts = ", ".join(f"{k} {h}/{n}" for k, (h, n) in tallies.items())
    report_line(f"criterion 3 {verdict(ok)}: {parts}; bridge/loop statement with cycles on both sides "
                f"{corrected[0]}/{corrected[1]}; literal counterexamples {literal_counterexamples} in {dt:.1f}s")
    assert ok


def test_criterion_4_vanishing_order(report_line):
    t0 = time.perf_counter()
    literal, corrected, undetermined, first_bad = [0, 0], [0, 0], 0, None
    for g in connected_multigraphs(6):
        if not any(classify_edge(g, i) in ("bridge", "loop") for i in range(g.n_edges)):
            continue
        rows = vanishing_order_check(g)
        for r in rows:
            if r.get("undetermined"):
                undetermined += 1
                continue
            literal[0] += r["holds"]
            literal[1] += 1
            if not r["holds"] and first_bad is None:
                first_bad = f"{g.to_text()!r} edge {r['edge']} order {r['order']} predicted {r['predicted']}"
            if r["cycles_on_both_sides"]:
                corrected[0] += r["holds"]
                corrected[1] += 1
    dt = time.perf_counter() - t0
    ok = literal[0] == literal[1] and undetermined == 0
    report_line(f"criterion 4 {verdict(ok)}: literal law {literal[0]}/{literal[1]} bridge/loop edges, "
                f"with cycles on both sides {corrected[0]}/{corrected[1]}, undetermined {undetermined}; "
                f"first failure {first_bad} in {dt:.1f}s")
    assert ok


def _arrangement_suite() -> tuple[list[Arrangement], int]:
    out, unstable = [], 0
    primes = [2, 3, 5, 7]
    cands = [graph_arrangement(g) for g in connected_multigraphs(4) if betti1(g) >= 1]
    rng = random.Random(20240501)
    for _ in range(200):
        dim = rng.randint(2, 4)
        cands.append(random_arrangement(rng, dim, rng.randint(1, 4)))
    seen = set()
    for a in cands:
        key = (a.ambient_dim, a.normals)
        if key in seen or a.size > 4 or a.ambient_dim > 4:
            continue
        seen.add(key)
        if not matroid_stable_mod(a, primes):
            unstable += 1
            continue
        out.append(a)
    return out, unstable


def test_criterion_5_arrangement_oracle(report_line):
    t0 = time.perf_counter()
    arrs, unstable = _arrangement_suite()
    mism, disagree, failing = 0, 0, 0
    for a in arrs:
        c = complement_class(a)
        mism += any(c(q) != complement_count_projective(a, q) for q in (2, 3, 5, 7))
        chk = mobius_condition_check(a)
        disagree += not chk["agree"]
        failing += not chk["mobius_passes"]
    dt = time.perf_counter() - t0
    ok = len(arrs) >= 20 and mism == 0 and disagree == 0
    report_line(f"criterion 5 {verdict(ok)}: {len(arrs)} arrangements (<= 4 hyperplanes, <= P^3), "
                f"{mism} count mismatches, {disagree} Mobius/T-positivity disagreements, {failing} failing the "
                f"condition; {unstable} skipped as not matroid-stable mod 2,3,5,7 in {dt:.1f}s")
    assert ok


def test_criterion_6_lambda_oracle(report_line):
    t0 = time.perf_counter()
    graphs = [g for g in connected_multigraphs(5) if 1 <= betti1(g) <= 2]
    mism, chi_bad = [], 0
    for g in graphs:
        c = lambda_class(g)
        if any(c(q) != lambda_oracle_count(g, q) for q in (2, 3, 5)):
            mism.append(g.to_text())
        chi_bad += lambda_report(g).strata_chi_sum != betti1(g)
    dt = time.perf_counter() - t0
    ok = not mism and chi_bad == 0 and dt < 60
    report_line(f"criterion 6 {verdict(ok)}: {len(graphs)} graphs x q in (2,3,5), {len(mism)} mismatches, "
                f"{chi_bad} strata chi sums != b1 in {dt:.1f}s (limit 60s)")
    assert ok


def _loopless_connected_small():
    seen = {}
    for v in range(1, 5):
        pairs = list(combinations(range(v), 2))
        for k in range(len(pairs) + 1):
            for es in combinations(pairs, k):
                g = Multigraph(v, es)
                if g.is_connected():
                    seen.setdefault(canonical_form(g), g)
    for g in connected_multigraphs(6):
        if not g.has_loops() and g.vertex_count <= 4:
            seen.setdefault(canonical_form(g), g)
    return list(seen.values())


def test_criterion_7_wonderful_compactification(report_line):
    t0 = time.perf_counter()
    oracle_bad = [(s, D) for s, g in (("edge", path(1)), ("path", path(2)), ("triangle", cycle(3)))
                  for D in (1, 2, 3) if blowup_oracle(g, D) != conf_class(g, D)]
    graphs = _loopless_connected_small()
    eul_bad = sum(euler_characteristic(conf_class(g, D)) != conf_euler(g, D) for g in graphs for D in (1, 2, 3))
    dt = time.perf_counter() - t0
    ok = not oracle_bad and eul_bad == 0
    report_line(f"criterion 7 {verdict(ok)}: blowup oracle 9 cases, mismatches {oracle_bad}; Euler formula on "
                f"{len(graphs)} loopless graphs x D in 1..3, {eul_bad} mismatches in {dt:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_8_csm_identities(report_line):
    t0 = time.perf_counter()
    rng = random.Random(8)
    round_trip = 0
    for _ in range(1000):
        chis = [rng.randint(-100, 100) for _ in range(rng.randint(1, 11))]
        g = g_from_chi(chis)
        round_trip += list(chi_from_g(g, len(chis)).chis) == chis and g_from_chi(chi_from_g(g)) == g
    t_rt = time.perf_counter()

    small = list(connected_multigraphs(3))
    cache = {canonical_form(g): c_gamma(g) for g in small}
    prod_ok = 0
    pairs = list(combinations_with_replacement(small, 2))
    for g1, g2 in pairs:
        # the union is computed from its own Kirchhoff polynomial, not from the factors
        direct = c_gamma(disjoint_union(g1, g2))
        prod_ok += direct == cache[canonical_form(g1)] * cache[canonical_form(g2)]
    t_prod = time.perf_counter()

    corpus = list(connected_multigraphs(5))
    cprime_ok, cprime_n, qlim_ok, countable = 0, 0, 0, 0
    for g in corpus:
        chk = feynman_rule_checks(g)
        if "C_prime_0_holds" in chk:
            cprime_n += 1
            cprime_ok += chk["C_prime_0_holds"] and chk["chi01_holds"]
        try:
            qd, info = q_deformed_class([kirchhoff_polynomial(g)], g.n_edges)
        except (NotPolynomialError, DrawsDisagree):
            continue
        countable += 1
        polar_g = g_from_chi(chi_profile_by_polar_degrees(kirchhoff_polynomial(g)))
        qlim_ok += info["limit_matches_g_from_chi"] and qd.limit() == polar_g
    dt = time.perf_counter() - t0
    ok = (round_trip == 1000 and prod_ok == len(pairs) and cprime_ok == cprime_n == len(corpus)
          and qlim_ok == countable)
    report_line(
        f"criterion 8 {verdict(ok)}: round trip {round_trip}/1000 ({t_rt - t0:.1f}s); product rule "
        f"{prod_ok}/{len(pairs)} pairs ({t_prod - t_rt:.1f}s); C'(0) = n - chi(X) and chi sum "
        f"{cprime_ok}/{len(corpus)}; q -> 1 limit equals counting and polar G on {qlim_ok}/{countable} graphs "
        f"with countable slices ({len(corpus) - countable} have a non-polynomial slice count) in {dt:.1f}s")
    assert ok


def test_criterion_9_aluffi_scan(report_line, capsys):
    t0 = time.perf_counter()
    code, rep = run(["scan", "--max-edges", "6"])
    capsys.readouterr()
    dt = time.perf_counter() - t0
    res = rep["result"]
    holds = not res["exceptions"] and not res["undetermined"]
    report_line(f"criterion 9 {verdict(holds and dt < 600)}: report on {res['graphs']} non-forest graphs, "
                f"chi(Y) histogram {res['histogram']}, exceptions {res['exceptions']}, undetermined "
                f"{len(res['undetermined'])}; forests (chi(Y) = n) by edge count {res['forests_by_edge_count']} "
                f"in {dt:.1f}s (limit 600s)")
    # a property report: only the runtime bound and completeness are asserted
    assert dt < 600 and not res["undetermined"]
