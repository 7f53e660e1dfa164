"""Time the fast sampler against the precision-factorization baseline.

The fast path should scale roughly linearly in p at fixed n (log-log
slope near 1), the baseline cubically (slope near 3), with the gap at
the largest p giving the headline speedup.
"""
from fastmvg import render_bench_csv, run_bench

result = run_bench(n_grid=[50], p_grid=[250, 500, 1000, 2000],
                   repetitions=5, seed=0)

print(render_bench_csv(result))
fast = result.slopes[("fast", 50)]
base = result.slopes[("baseline", 50)]
speedup = (result.median_seconds("baseline", 50, 2000)
           / result.median_seconds("fast", 50, 2000))
print(f"fast log-log slope in p    : {fast:.2f}   (linear cost -> ~1)")
print(f"baseline log-log slope in p: {base:.2f}   (cubic cost -> ~3)")
print(f"speedup at n=50, p=2000    : {speedup:.0f}x")
