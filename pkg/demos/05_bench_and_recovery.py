"""Small versions of the two simulation studies.

The first study counts iterations to a target objective for the three
solvers and reports bootstrap medians.  The second fits validation-tuned
paths and scores support recovery.  Both finish in a minute or two.
"""
from pathlib import Path
import tempfile

from nonconvex_ag.harness import bench_preset, recovery_preset, run_benchmark, run_recovery

bench = run_benchmark(bench_preset("desk", ns=(100,), q=120, taus=(0.5,), reps=4,
                                   max_iter=1500, B=500), workers=2)
print("family   penalty  method        median   95% CI")
for s in bench.summary:
    med = "broken" if s.breakdown else f"{s.median:7.1f}"
    print(f"{s.family.value:8s} {s.penalty.value:8s} {s.method.value:12s} {med}  "
          f"[{s.ci_lo}, {s.ci_hi}]")

rec = run_recovery(recovery_preset("desk", n=200, q=150, taus=(0.5,), snrs=(1.0, 10.0),
                                   reps=2, grid_size=15, families=("linear",)), workers=2)
def fmt(v):
    # PPV/NPV are undefined (None) when nothing, or everything, is selected
    return "  -  " if v is None else f"{v:.3f}"


print("\npenalty  snr   PPV    NPV    scaled error")
for s in rec.summary:
    print(f"{s.penalty.value:8s} {s.snr:4.0f}  {fmt(s.ppv_mean)}  {fmt(s.npv_mean)}  "
          f"{fmt(s.scaled_error_mean)}")

out = Path(tempfile.mkdtemp())
bench.write(out / "bench.csv", out / "bench_records.csv")
print("\nwrote", sorted(p.name for p in out.iterdir()))
