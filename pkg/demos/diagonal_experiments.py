"""
CSYM on the diagonal test problems
==================================

Diagonals d_j = R_j exp(2 pi i phi_j) with R_j running linearly from 1 to
10 and right-hand side all ones.  Five angle rules; each run writes a CSV
per trace plus two SVG charts into demos/out/.

The first example also shows the sensitivity to how the diagonal is
rounded: the same problem generated in double-double, once kept at full
precision and once rounded through double, gives residual curves that
agree at first and then separate.
"""

import os

import numpy as np

from rlkrylov import io
from rlkrylov.experiments import run_example

out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(out, exist_ok=True)
n = 100

for k in range(1, 6):
    run = run_example(k, n=n)
    first = next(iter(run.diagonals.values()))
    io.emit_outputs(run.traces, os.path.join(out, "example%d" % k), diagonal=first)
    print("Example %d" % k)
    for label, tr in run.traces.items():
        hit = tr.iterations_to(1e-8)
        print("  %-11s reaches 1e-8 at step %s, final %.2e" % (label, hit, tr.relative[-1]))

# Example 5: one parity of steps does almost nothing
r = np.asarray(run_example(5, n=n).relative("random"), dtype=float)
r = r[r > 0]
drop = 1 - r[1:] / r[:-1]
print("\nExample 5, random angles: median decrease %.3f on one parity of steps, %.4f on the other"
      % (np.median(drop[0::2]), np.median(drop[1::2])))
print("\nfiles in", out)
