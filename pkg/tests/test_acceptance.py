"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a ``PASS`` or ``FAIL`` line through the ``record`` fixture;
the lines are repeated in the terminal summary under "acceptance criteria".
"""
import random
import time
from itertools import permutations

import numpy as np

from vcprune import (
    Session, apply_substitution, behaviors, demote_shared_assertions,
    graph_correspondence, normalize, parse_graph, parse_term, print_term, prune,
    simplify, vc,
)
from vcprune.matcher import build_substitution, environments, max_weight_matching, matching_weight
from vcprune.oracle import (
    GeneratorParams, TruthSpace, is_unsat, random_formula, random_graph,
    random_graph_edit, random_pair, shuffle_commutative,
)
from vcprune.pruner import prune_details, prune_simple
from vcprune.terms import collect_constants


def verdict(record, number, title, ok, detail):
    record(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1

def test_01_appended_assertion_example(record):
    s = Session()
    old = parse_term("(and f1 (not f2))", s)
    new = parse_term("(or (and f1 (not f2)) (and f1 f2 (not f3)))", s)
    expected = normalize(parse_term("(and f1 f2 (not f3))", s))
    t0 = time.perf_counter()
    out = prune(old, new)
    elapsed = time.perf_counter() - t0
    verdict(record, 1, "appended-assertion example", out is expected and elapsed < 1.0,
            f"got {print_term(out)} in {elapsed:.3f}s (want {print_term(expected)}, < 1s)")


# ---------------------------------------------------------------- 2

def test_02_worked_example(record):
    s = Session()
    old = parse_term("(or (and f1 f2) (and f3 f4))", s)
    new = parse_term("(and f2 f4 (or f1 f3))", s)
    t0 = time.perf_counter()
    out = prune(old, new)
    elapsed = time.perf_counter() - t0
    verdict(record, 2, "worked example prunes to false", out is s.false and elapsed < 1.0,
            f"got {print_term(out)} in {elapsed:.3f}s")


# ---------------------------------------------------------------- 3

def test_03_chain_behaviors(record):
    s = Session()
    g = parse_graph("node 1 assume f1\nnode 2 assert f2\nnode 3 assert f3\n"
                    "edge 1 2\nedge 2 3\n", s)
    want = {
        1: ("true", "f1", "false"),
        2: ("f1", "(and f1 f2)", "(and f1 (not f2))"),
        3: ("(and f1 f2)", "(and f1 f2 f3)", "(and f1 f2 (not f3))"),
    }
    got = {n: tuple(print_term(simplify(x)) for x in (b.pre, b.post, b.wrong))
           for n, b in behaviors(g).items()}
    wrong = sum(got[n][k] != want[n][k] for n in want for k in range(3))
    verdict(record, 3, "three-node chain behaviors", got == want,
            f"{9 - wrong}/9 formulas match")


# ---------------------------------------------------------------- 4

def test_04_prune_correct(record):
    t0 = time.perf_counter()
    checked = violations = seed = 0
    while checked < 10_000:
        s = Session()
        old, new = random_pair(GeneratorParams(seed=seed, max_atoms=8), s)
        seed += 1
        if not is_unsat(old):
            continue
        checked += 1
        out = prune(old, new)
        space = TruthSpace([new, out])
        if (space.mask(new) == 0) != (space.mask(out) == 0):
            violations += 1
    elapsed = time.perf_counter() - t0
    verdict(record, 4, "PruneCorrect", violations == 0 and elapsed < 120,
            f"{violations} violations over {checked} UNSAT-old pairs "
            f"({seed} generated) in {elapsed:.1f}s")


# ---------------------------------------------------------------- 5

def test_05_pointwise_invariants(record):
    t0 = time.perf_counter()
    inv_a = inv_b = 0
    for seed in range(10_000):
        s = Session()
        p1, p2 = random_pair(GeneratorParams(seed=seed, max_atoms=8), s)
        out = prune_simple(p1, p2)
        space = TruthSpace([p1, p2, out])
        m1, m2, mo = space.mask(p1), space.mask(p2), space.mask(out)
        outside = space.full ^ m1
        inv_a += bool(outside & m2 & ~mo)
        inv_b += bool(outside & mo & ~m2)
    elapsed = time.perf_counter() - t0
    verdict(record, 5, "PruneInvA / PruneInvB", inv_a == inv_b == 0 and elapsed < 120,
            f"{inv_a} + {inv_b} violations over 10000 pairs in {elapsed:.1f}s")


# ---------------------------------------------------------------- 6

FRESH = ["k", "m", "n", "o", "e", "i", "j", "l", "c", "d", "g", "h", "k2", "m2"]


def _distinct_envs(t):
    vals = list(environments(normalize(t)).values())
    return all(vals[i] != vals[j] for i in range(len(vals)) for j in range(i))


def test_06_renaming_scenario(record):
    t0 = time.perf_counter()
    cases = recovered = pruned = seed = 0
    while cases < 500:
        s = Session()
        mode = "integer" if seed % 2 else "propositional"
        t = random_formula(GeneratorParams(seed=seed, max_atoms=6, max_depth=4, mode=mode), s)
        rng = random.Random(seed)
        seed += 1
        if not _distinct_envs(t):
            continue
        cases += 1
        names = sorted(collect_constants(t))
        # half the cases move to fresh names, half permute the existing ones
        pool = FRESH if cases % 2 else names
        rename = dict(zip(names, rng.sample(pool, len(names))))
        new = shuffle_commutative(apply_substitution(t, rename), rng)
        subst = build_substitution(t, new)
        recovered += all(subst[c] == rename[c] for c in names)
        out, _ = prune_details(t, new)
        pruned += out is s.false
    elapsed = time.perf_counter() - t0
    ok = recovered == pruned == cases and elapsed < 60
    verdict(record, 6, "renaming recovery", ok,
            f"matched {recovered}/{cases}, pruned to false {pruned}/{cases} in {elapsed:.1f}s")


# ---------------------------------------------------------------- 7

def _brute_force_weight(w):
    rows, cols = w.shape
    if rows > cols:
        w, rows, cols = w.T, cols, rows
    gain = np.maximum(w, 0)  # leaving a row unmatched is worth 0
    best = 0
    for perm in permutations(range(cols), rows):
        best = max(best, int(gain[np.arange(rows), perm].sum()))
    return best


def test_07_hungarian_optimality(record):
    rng = np.random.default_rng(2024)
    violations = 0
    for _ in range(1000):
        rows, cols = rng.integers(1, 8, size=2)
        w = rng.integers(-30, 60, size=(rows, cols))
        if matching_weight(w, max_weight_matching(w)) != _brute_force_weight(w):
            violations += 1
    verdict(record, 7, "Hungarian optimality", violations == 0,
            f"{violations} violations over 1000 matrices up to 7x7")


# ---------------------------------------------------------------- 8

def test_08_demotion_equivalence(record):
    pairs = violations = seed = 0
    while pairs < 500:
        s = Session()
        p = GeneratorParams(seed=seed, max_atoms=5)
        seed += 1
        old = random_graph(p, s, max_nodes=6)
        if not is_unsat(vc(old)):
            continue
        new = random_graph_edit(old, p, s)
        if len(new.nodes) > 6:
            continue
        pairs += 1
        demoted = demote_shared_assertions(old, new, graph_correspondence(old, new))
        if is_unsat(vc(new)) != is_unsat(vc(demoted)):
            violations += 1
    verdict(record, 8, "demotion equivalence", violations == 0,
            f"{violations} violations over {pairs} graph pairs ({seed} generated)")


# ---------------------------------------------------------------- 9

def _family(s, m, n):
    old = s.or_(*(s.const(f"c{i}") for i in range(1, m)))
    new = s.const(f"c{m}")
    for _ in range(n - 1):
        new = s.and_(s.const(f"c{m}"), new)
    return old, new


def _time_prune(m, n, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        s = Session()
        old, new = _family(s, m, n)
        t0 = time.perf_counter()
        prune(old, new)
        best = min(best, time.perf_counter() - t0)
    return best


def test_09_worst_case_scaling(record):
    t0 = time.perf_counter()
    points = [(200, 80), (400, 160), (800, 320)]
    times = [_time_prune(m, n) for m, n in points]
    ratios = [b / a for a, b in zip(times, times[1:])]
    elapsed = time.perf_counter() - t0
    ok = all(2.0 <= r <= 6.0 for r in ratios) and elapsed < 60
    verdict(record, 9, "worst-case scaling", ok,
            "times " + ", ".join(f"{m}x{n}={t * 1000:.1f}ms" for (m, n), t in zip(points, times))
            + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios)
            + f" (want 4 +/- 50%) in {elapsed:.1f}s")


# ---------------------------------------------------------------- 10

def test_10_normalization(record):
    bad_idem = bad_shuffle = bad_sem = 0
    for seed in range(10_000):
        s = Session()
        mode = "integer" if seed % 4 == 0 else "propositional"
        t = random_formula(GeneratorParams(seed=seed, max_atoms=6, max_depth=4, mode=mode), s)
        n = normalize(t)
        bad_idem += normalize(n) is not n
        bad_shuffle += normalize(shuffle_commutative(t, random.Random(seed))) is not n
        space = TruthSpace([t, n])
        bad_sem += space.mask(t) != space.mask(n)
    ok = bad_idem == bad_shuffle == bad_sem == 0
    verdict(record, 10, "normalization", ok,
            f"idempotence {bad_idem}, shuffle {bad_shuffle}, semantics {bad_sem} "
            f"violations over 10000 formulas")
