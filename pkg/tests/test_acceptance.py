"""Acceptance criteria 1-10. Each test records one PASS/FAIL line, printed in the session summary.

Run alone with `pytest tests/test_acceptance.py -v` or as a script: `python3 tests/test_acceptance.py`.
"""

import random
import sys
import time
from itertools import combinations, product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from mcgs import generators as gen
from mcgs.frechet import decide_frechet
from mcgs.freespace import decide_traversal_distance
from mcgs.gcs import ExactPoint, simplify_curve_min_vertex
from mcgs.geom import dist
from mcgs.graph import RootedTree
from mcgs.leaf_restricted import simplify_leaf_restricted
from mcgs.oracles import (
    brute_force_dominating_set,
    brute_force_max2sat,
    brute_force_min_simplification,
    count_satisfied,
    discrete_frechet,
    discrete_weak_frechet,
    min_leaf_star_simplification,
    min_traversal_reduction_tree,
)
from mcgs.result import AlphaCapExceeded, Infeasible
from mcgs.vertex_restricted import simplify_vertex_restricted

from _support import random_polyline, random_points, random_tree, tree_leaves, walk_tree

# pinned tolerances
ORACLE_TOLERANCE = 0  # vertex counts must match exactly
FRECHET_BAND = 0.02
SAMPLING_PITCH = 0.01
LOOP_TOLERANCE = 1e-9
TIME_LIMIT = 60.0

RESULTS: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[number])


def unit_disk_sets(count: int = 10, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [random_points(rng, rng.randint(1, 5)) for _ in range(count)]


def test_criterion_01_vertex_oracle():
    rng = random.Random(2024)
    runs = mismatches = 0
    started = time.perf_counter()
    for _ in range(50):
        T = random_tree(rng, rng.randint(2, 6))
        for delta in (0.15, 0.3, 0.6):
            for mode in ("strong", "weak"):
                got = simplify_vertex_restricted(T, delta, mode).vertex_count
                want = brute_force_min_simplification(T, delta, mode).vertex_count
                runs += 1
                mismatches += abs(got - want) > ORACLE_TOLERANCE
    elapsed = time.perf_counter() - started
    ok = mismatches == 0 and elapsed < 300
    record(1, ok, f"{runs} runs on 50 trees, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def curve_count(T: RootedTree, leaf: int, delta: float, mode: str):
    P = [T.points[v] for v in reversed(T.path_to_root(leaf))]
    best = None
    for rho, p in T.points.items():
        if rho == leaf or dist(p, T.points[T.root]) > delta:
            continue
        res = simplify_curve_min_vertex(P, delta, mode, sorted(T.points.items()), ExactPoint(p), ExactPoint(T.points[leaf]))
        if res and (best is None or res.count < best):
            best = res.count
    return best


def test_criterion_02_leaf_oracle():
    rng = random.Random(2025)
    runs = mismatches = curve_runs = curve_mismatches = trees = 0
    started = time.perf_counter()
    while trees < 30:
        T = random_tree(rng, rng.randint(3, 6))
        lv = tree_leaves(T)
        trees += 1
        for k in (1, 2, 3):
            if k > len(lv):
                continue
            leaves = sorted(rng.sample(lv, k))
            for delta in (0.15, 0.3, 0.6):
                for mode in ("strong", "weak"):
                    try:
                        got = simplify_leaf_restricted(T, leaves, delta, mode).vertex_count
                    except Infeasible:
                        got = None
                    try:
                        want = brute_force_min_simplification(T, delta, mode, "leaf", leaves).vertex_count
                    except Infeasible:
                        want = None
                    runs += 1
                    mismatches += got != want
                    if k == 1:
                        curve_runs += 1
                        curve_mismatches += got != curve_count(T, leaves[0], delta, mode)
    elapsed = time.perf_counter() - started
    ok = mismatches == 0 and curve_mismatches == 0 and elapsed < 300
    record(2, ok, f"{runs} runs on {trees} trees, {mismatches} oracle mismatches, "
                  f"{curve_mismatches}/{curve_runs} k=1 curve mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_03_frechet_soundness():
    rng = random.Random(2026)
    pairs = compared = disagreements = 0
    for _ in range(200):
        P, Q = random_polyline(rng, 6), random_polyline(rng, 6)
        pairs += 1
        for mode, oracle in (("strong", discrete_frechet), ("weak", discrete_weak_frechet)):
            value = oracle(P, Q, SAMPLING_PITCH)
            delta = rng.uniform(0.05, 1.0)
            if abs(value - delta) <= FRECHET_BAND:
                continue
            compared += 1
            disagreements += decide_frechet(P, Q, delta, mode) != (value <= delta)
    ok = disagreements == 0
    record(3, ok, f"{pairs} pairs, {compared} decisions outside the band, {disagreements} disagreements")
    assert ok


def test_criterion_04_traversal_reduction():
    lines = []
    mismatches = witness_failures = 0
    for P in unit_disk_sets():
        k, S = brute_force_dominating_set(P)
        inst = gen.gen_mdsudg_traversal_instance(P)
        edges, _ = min_traversal_reduction_tree(inst)
        witness_ok = decide_traversal_distance(inst.graph, gen.mdsudg_traversal_witness(inst, S), 1.0)
        witness_failures += not witness_ok
        mismatches += edges != len(P) + k
        lines.append(f"n={len(P)} k*={k} n+k*={len(P) + k} min={edges}")
    ok = mismatches == 0 and witness_failures == 0
    record(4, ok, f"10 point sets, {mismatches} identity mismatches, {witness_failures} witness failures; "
                  + "; ".join(lines))
    assert ok, "minimum edge count differs from n + k* (see the decisions ledger)"


def test_criterion_05_star_reduction():
    lines = []
    mismatches = 0
    for P in unit_disk_sets():
        k, _ = brute_force_dominating_set(P)
        inst = gen.gen_mdsudg_leaf_instance(P)
        vertices, _ = min_leaf_star_simplification(inst, "graph")
        mismatches += vertices != k + 1
        lines.append(f"k*+1={k + 1} min={vertices}")
    ok = mismatches == 0
    record(5, ok, f"10 point sets, {mismatches} mismatches; " + "; ".join(lines))
    assert ok


def binary_instances(max_vars: int = 3):
    """Every set of one or two distinct binary clauses over variables 1..v using all of them."""
    lits = [l for v in range(1, max_vars + 1) for l in (v, -v)]
    clauses = sorted({tuple(sorted(c, key=abs)) for c in combinations(lits, 2) if abs(c[0]) != abs(c[1])})
    for m in (1, 2):
        for chosen in combinations(clauses, m):
            used = {abs(l) for c in chosen for l in c}
            nv = max(used)
            if used != set(range(1, nv + 1)):
                continue
            F2 = gen.Cnf2(nv, list(chosen))
            if F2.is_bipartite():
                yield F2


def test_criterion_06_clause_gadgets():
    gadget_errors = 0
    for clause in ((1, 2), (1, -2), (-1, 2), (-1, -2)):
        inst = gen.gen_max2sat_instance(gen.Cnf2(2, [clause]))
        for bits in product((False, True), repeat=2):
            two = gen.max2sat_witness(inst, bits, barbs="none")
            three = gen.max2sat_witness(inst, bits, barbs="all")
            gadget_errors += gen.verify_max2sat_witness(inst, two) != gen.clause_satisfied(clause, bits)
            gadget_errors += not gen.verify_max2sat_witness(inst, three)
    identity_bad = []
    instances = 0
    for F2 in binary_instances():
        instances += 1
        k, bits = brute_force_max2sat(F2.num_vars, F2.clauses)
        inst = gen.gen_max2sat_instance(F2)
        W = gen.max2sat_witness(inst, bits)
        m = len(F2.clauses)
        complexity = W.num_edges() + len(W.points)
        if not gen.verify_max2sat_witness(inst, W) or complexity != 6 * m - 2 * k + 1:
            identity_bad.append(f"{F2.clauses}: {complexity} vs {6 * m - 2 * k + 1}")
    ok = gadget_errors == 0 and not identity_bad
    detail = f"16 gadget checks with {gadget_errors} errors; identity on {instances} instances (m<=2), {len(identity_bad)} off"
    if identity_bad:
        detail += " [" + "; ".join(identity_bad[:4]) + (" ..." if len(identity_bad) > 4 else "") + "]"
    record(6, ok, detail)
    assert ok


def test_criterion_07_transform():
    F2, k = gen.transform_3sat_to_bipartite_max2sat([(1, 2, 3)])
    wrong = []
    for xyz in product((False, True), repeat=3):
        best = max(count_satisfied(F2.clauses, xyz + aux) for aux in product((False, True), repeat=7))
        if best != (13 if any(xyz) else 12):
            wrong.append((xyz, best))
    ok = not wrong and k == 13 and len(F2.clauses) == 16
    record(7, ok, f"8 assignments x 128 extensions, {len(wrong)} wrong, k={k}")
    assert ok


def landing_shift(inst, gadget) -> float:
    """Where a link from the bottom stop through the zigzag centre meets the top line, relative to the top stop."""
    pts = inst.graph.points
    delta = inst.delta
    lo = pts[gadget["L"]]
    zlo, zhi = (pts[v] for v in gadget["zigzag"])
    centre = ((zlo.x + zhi.x) / 2, (zlo.y + zhi.y) / 2)
    slope = (centre[0] - lo.x) / (centre[1] - lo.y)
    x_at_top = lo.x + slope * (delta - lo.y)
    return gadget["x"] + delta - x_at_top


def test_criterion_08_subset_sum():
    A = [1, 2]
    failures = []
    for B in (1, 2, 3):
        inst = gen.gen_subset_sum_instance(A, B, "tree")
        subset = {1: [0], 2: [1], 3: [0, 1]}[B]
        W = gen.subset_sum_witness(inst, subset)
        if W.num_edges() != 3 * (len(A) + 1) or not gen.verify_subset_sum_witness(inst, W):
            failures.append(f"B={B} witness")
        if inst.delta != sum(A) + 1:
            failures.append(f"B={B} delta")
        for enc, h, g in zip(inst.meta["encoded"], inst.meta["loopHeights"], inst.meta["gadgets"]):
            d = inst.delta
            if abs(h - enc * d / (d / 2 - enc)) > LOOP_TOLERANCE:
                failures.append(f"B={B} height")
            if abs(landing_shift(inst, g) - enc) > LOOP_TOLERANCE:
                failures.append(f"B={B} landing")
    ok = not failures
    sigma = gen.gen_subset_sum_instance(A, 1)
    record(8, ok, f"B in 1..3, 9-edge witnesses at delta=4, loop heights and landing shifts to {LOOP_TOLERANCE:g} "
                  f"(values encoded as sigma*a, sigma={sigma.meta['sigma']:.3f}); failures: {failures or 'none'}")
    assert ok


def test_criterion_09_properties():
    import test_properties as props

    started = time.perf_counter()
    props.test_frechet_monotone_and_strong_implies_weak()
    props.test_frechet_scale_invariance()
    props.test_tree_decisions_monotone_and_implications()
    props.test_tree_decisions_scale_invariance()
    for seed in range(60):
        props.test_vertex_dp_properties(seed)
        props.test_leaf_dp_properties(seed)
    props.test_save_load_round_trips()
    cases = 300 + 150 + 150 + 100 + 60 + 60 + 200
    record(9, True, f"{cases} randomized cases across decisions, DPs and round-trips, {time.perf_counter() - started:.1f}s")


def test_criterion_10_performance():
    rng = random.Random(7)
    T = walk_tree(rng, 40)
    vertex_result = None
    chosen = None
    for delta in (0.05, 0.03, 0.02, 0.015, 0.01, 0.005):
        try:
            started = time.perf_counter()
            vertex_result = simplify_vertex_restricted(T, delta, alpha_cap=12)
            vertex_time = time.perf_counter() - started
            chosen = delta
            break
        except AlphaCapExceeded:
            continue
    assert vertex_result is not None, "no delta on the ladder keeps alpha <= 12"
    L = walk_tree(random.Random(8), 60)
    leaves = sorted(random.Random(9).sample(tree_leaves(L), 4))
    started = time.perf_counter()
    leaf_result = simplify_leaf_restricted(L, leaves, 0.1)
    leaf_time = time.perf_counter() - started
    ok = vertex_time < TIME_LIMIT and leaf_time < TIME_LIMIT and vertex_result.stats["alpha"] <= 12
    record(10, ok, f"vertex n=40 delta={chosen} alpha={vertex_result.stats['alpha']} -> {vertex_result.vertex_count} "
                   f"vertices in {vertex_time:.2f}s; leaf n=60 k=4 -> {leaf_result.vertex_count} vertices in {leaf_time:.2f}s")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print()
    for number in sorted(RESULTS):
        print(RESULTS[number])
