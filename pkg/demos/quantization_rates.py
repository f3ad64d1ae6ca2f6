"""How the W1 quantisation error of the initial datum depends on tails.

Compact support gives the sharp 1/(4n) limit, square-integrable sqrt-CDF
tails give a universal 1/sqrt(n) bound, power-law tails slow the decay to
n^{1/alpha - 1}, and an infinite first moment makes every finite
quantisation infinitely far away.

Usage: python demos/quantization_rates.py [outdir]
"""

import math
import sys
from pathlib import Path

from stickywave import bench, csvio
from stickywave.measures import (optimal_quantize, parse_measure,
                                 w1, w1_upper_bound_sqrt)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/quantization")

# --- 1. the compact-support limit n * W1 -> (b - a) / 4 -------------------
m = parse_measure("uniform:0,1")
for n in (16, 256, 4096):
    print(f"uniform, n={n:>5}: n*W1 = {n * w1(m, optimal_quantize(m, n)):.6f}"
          f"  (limit 0.25)")

# --- 2. the sqrt(F(1-F)) envelope ------------------------------------------
for spec in ("uniform:0,1", "laplace:0,1", "pareto:3", "pareto:2"):
    bound = w1_upper_bound_sqrt(parse_measure(spec))
    shown = f"{bound:.4f}" if math.isfinite(bound) else "divergent"
    print(f"integral of sqrt(F(1-F)) for {spec}: {shown}")

# --- 3. fitted decay exponents --------------------------------------------
cfg = bench.RunConfig(measure=("uniform:0,1", "laplace:0,1", "stretchedexp:1",
                               "pareto:3", "pareto:2", "pareto:1.5", "pareto:1"),
                      n=tuple(2 ** p for p in range(4, 15)), out=str(out))
rows, fits = bench.run_quantize_study(cfg)
csvio.write_csv(out / "quantize.csv", "quantize", rows)
csvio.write_csv(out / "tail_fits.csv", "tail_fits", fits)
for spec, slope in fits:
    print(f"{spec:>16}: W1 ~ n^{slope:+.3f}")
print("pareto:1 rows carry the infinite-distance sentinel (no rate exists)")
print(f"wrote {out}/quantize.csv and tail_fits.csv")
