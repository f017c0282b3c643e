"""
From control-flow graphs to verification conditions
===================================================

A DSA graph has assumption nodes and assertion nodes.  Walking it in
topological order gives, per node, the states that reach it (pre), the
states that leave it (post) and the states that violate it (wrong).  The VC
is the disjunction of all wrong behaviors.

When an edited program keeps an assertion of the old one, in the same
context, that assertion can be turned into an assumption: it was already
proved.
"""
from pathlib import Path

from vcprune import (
    Session, behaviors, demote_shared_assertions, graph_correspondence,
    parse_graph, print_term, vc,
)
from vcprune.oracle import is_unsat

data = Path(__file__).parent / "data"
session = Session()
old = parse_graph((data / "appended_old.dsa").read_text(), session)
new = parse_graph((data / "appended_new.dsa").read_text(), session)

print("behaviors of the new graph")
for node, b in behaviors(new).items():
    print(f"  node {node}: pre={print_term(b.pre)}")
    print(f"          post={print_term(b.post)}")
    print(f"          wrong={print_term(b.wrong)}")

print("\nvc(old) =", print_term(vc(old)), " UNSAT:", is_unsat(vc(old)))
print("vc(new) =", print_term(vc(new)))

corr = graph_correspondence(old, new)
print("\nshared assertions (old -> new):", corr)
demoted = demote_shared_assertions(old, new, corr)
print("vc(demoted) =", print_term(vc(demoted)))
print("same verdict:", is_unsat(vc(new)) == is_unsat(vc(demoted)))
