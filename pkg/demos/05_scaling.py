"""
How the cost grows with the field
=================================

Proxy construction uses a bounded number of exponentiations by E, so its
operation count should grow like a small power of log q.
"""

# %%
import math

from sl2proxy.plainfield import odd_prime_near
from sl2proxy.verify import bench_report

ladder = [odd_prime_near(2**k) for k in (10, 15, 20, 25, 30)]
rep = bench_report(ladder, seed=0)
for row in rep["ladder"]:
    print(f"q ~ 2^{math.log2(row['q']):5.1f}: {row['total_ops']:6d} black-box operations")
print("fitted degree in log q:", rep["fitted_degree"])
