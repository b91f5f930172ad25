#!/usr/bin/env python3
"""Cost of exact permanents.

The subset-sum evaluator costs O(2^N * N): every extra photon doubles the
work. That wall is the whole point of permanent-based sampling problems.
This script times dense complex permanents as N grows and shows the
thread-count independence of the result.
"""

import time

from mbcs import ginibre, permanent_fast, set_thread_count
from mbcs.permanent import warm_up

warm_up()  # compile outside the timed region

print(" N    seconds      |perm|")
for n in range(14, 25, 2):
    a = ginibre(n, n, seed=n)
    t0 = time.perf_counter()
    value = permanent_fast(a)
    elapsed = time.perf_counter() - t0
    print(f"{n:3d}   {elapsed:8.3f}   {abs(value):.4e}")

print()
a = ginibre(22, 22, seed=1)
values = []
for threads in (1, 2, 4):
    set_thread_count(threads)
    t0 = time.perf_counter()
    values.append(permanent_fast(a))
    print(f"{threads} thread(s): {time.perf_counter() - t0:.3f}s")
set_thread_count(1)
print("identical results across thread counts:", values[0] == values[1] == values[2])
