"""
Checking the pruner against brute force
=======================================

The oracle enumerates every assignment of a small formula: booleans for
opaque atoms, and integers from a bounded range for comparison atoms.  Random
(old, new) pairs are generated, those with a satisfiable old formula are
skipped, and the pruned result must be UNSAT exactly when new is.
"""
from collections import Counter

from vcprune import Session, normalize, print_term, prune
from vcprune.oracle import (
    GeneratorParams, Universe, check_prune_correct, random_pair, run_batch,
)
from vcprune.terms import node_count

session = Session()
old, new = random_pair(GeneratorParams(seed=22, max_atoms=4), session)
print("one pair, seed 22")
print("  old   ", print_term(old))
print("  new   ", print_term(new))
print("  pruned", print_term(prune(old, new)))
print("  report", check_prune_correct(old, new, seed=22).verdict)

for mode in ("propositional", "integer"):
    reports = run_batch(0, 1000, GeneratorParams(max_atoms=6, mode=mode),
                        Universe(int_range=(-3, 6)))
    tally = Counter(r.verdict for r in reports)
    print(f"\n{mode}: {dict(tally)}")
    before = after = 0
    for r in reports:
        if r.verdict == "pass":
            s = Session()
            _, new = random_pair(GeneratorParams(max_atoms=6, mode=mode, seed=r.seed), s)
            before += node_count(normalize(new))
            after += node_count(r.pruned)
    print(f"  nodes in new formulas {before}, after pruning {after}")
