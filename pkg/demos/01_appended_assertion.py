"""
Pruning a new verification condition against an old one
========================================================

A method is checked once, then edited by appending one more assertion.  The
old VC was UNSAT (the method was correct), so the parts of the new VC that
only restate the old one can be dropped before asking a prover again.
"""
from pathlib import Path

from vcprune import Session, parse_term, print_term, prune
from vcprune.oracle import is_unsat

data = Path(__file__).parent / "data"
session = Session()

# f1, f2, f3 stand for arbitrary formulas; the result is purely structural
old = parse_term("(and f1 (not f2))", session)
new = parse_term("(or (and f1 (not f2)) (and f1 f2 (not f3)))", session)
print("old      ", print_term(old))
print("new      ", print_term(new))
print("pruned   ", print_term(prune(old, new)))

# The same example with concrete integer comparisons, read from files.
old = parse_term((data / "appended_old.smt").read_text(), session)
new = parse_term((data / "appended_new.smt").read_text(), session)
pruned = prune(old, new)
print()
print("old      ", print_term(old), " UNSAT:", is_unsat(old))
print("new      ", print_term(new), " UNSAT:", is_unsat(new))
print("pruned   ", print_term(pruned), " UNSAT:", is_unsat(pruned))

# A conjunction whose common part covers every disjunct of old vanishes.
old = parse_term("(or (and f1 f2) (and f3 f4))", session)
new = parse_term("(and f2 f4 (or f1 f3))", session)
print()
print("old      ", print_term(old))
print("new      ", print_term(new))
print("pruned   ", print_term(prune(old, new)))
