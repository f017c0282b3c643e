"""
Matching constants across a rename
==================================

Edits often rename variables.  Each constant gets an "environment": the
multiset of paths from the root to its occurrences, with argument positions
under and/or left out.  Constants with similar environments (and, weakly,
similar names) are paired by a maximum weight matching, and the old formula
is renamed before pruning.
"""
from pathlib import Path

from vcprune import Session, build_substitution, parse_term, print_term, prune
from vcprune.matcher import environments, format_path, similarity_matrix

data = Path(__file__).parent / "data"
session = Session()
old = parse_term((data / "renamed_old.smt").read_text(), session)
new = parse_term((data / "renamed_new.smt").read_text(), session)

for label, t in (("old", old), ("new", new)):
    for name, env in environments(t).items():
        paths = ", ".join(f"{format_path(p)} x{k}" for p, k in sorted(env.items()))
        print(f"{label} {name:6} {paths}")

rows, cols, w = similarity_matrix(environments(old), environments(new))
print("\nsimilarity", rows, "x", cols)
print(w)

subst = build_substitution(old, new)
print("\nsubstitution:", dict(subst.items()))
print("pruned with matching:   ", print_term(prune(old, new)))
print("pruned without matching:", print_term(prune(old, new, match=False)))

# An old constant that loses its partner keeps its name, unless that name is
# now taken by the image of another constant; then it is moved aside.
old = parse_term("(and (f x) (g y))", session)
new = parse_term("(and (f y) (h z))", session)
print("\ncollision:", dict(build_substitution(old, new).items()))
