"""
The adversarial family
======================

With old = c1 or ... or c(m-1) and new a chain of n nested conjunctions of
cm, nothing can be pruned, but every conjunct is still compared against
every disjunct.  The work is proportional to m*n, so doubling both sizes
should make a run about four times slower.
"""
import time

import numpy as np

from vcprune import Session, prune


def family(session, m, n):
    old = session.or_(*(session.const(f"c{i}") for i in range(1, m)))
    new = session.const(f"c{m}")
    for _ in range(n - 1):
        new = session.and_(session.const(f"c{m}"), new)
    return old, new


sizes = [(100, 40), (200, 80), (400, 160), (800, 320)]
times = []
for m, n in sizes:
    runs = []
    for _ in range(5):
        session = Session()
        old, new = family(session, m, n)
        t0 = time.perf_counter()
        prune(old, new)
        runs.append(time.perf_counter() - t0)
    times.append(min(runs))
    print(f"m={m:4d} n={n:4d}  {times[-1] * 1000:8.2f} ms")

ratios = np.array(times[1:]) / np.array(times[:-1])
print("growth per doubling:", np.round(ratios, 2))
