"""Desk-scale sweep: measured risk against the floor as t grows.

Runs the orthogonal-samples experiment on 3 qubits at a reduced
repetition count, prints the per-cell summary, and writes the full
records, the summary table, and an SVG plot next to this script.

With matched ranks r = d/t each cell constrains all of H_X, but the
per-sample phases stay independent, so the floor (and the measured
risk) falls only slowly with t.
"""

from pathlib import Path

from qnfl_lab import aggregate, emit_csv, emit_plot, experiment_preset, run_experiment
from qnfl_lab.exper import emit_summary_csv

cfg = experiment_preset("orthogonal", repetitions=10)
print(f"experiment: {cfg.experiment}, d = {cfg.d}, cells {cfg.cells()}, "
      f"{cfg.repetitions} repetitions")

records = run_experiment(cfg, progress=print)
summaries = aggregate(records)

print()
print("   t  rank  conv      mean risk      std    floor")
for c in sorted(summaries, key=lambda c: c.t):
    print(f"{c.t:>4}  {c.rank_spec:>4}  {c.converged:>2}/{c.rows:<2}"
          f"  {c.mean_risk_converged:>11.4f}  {c.std_risk:>7.4f}  {c.bound:>7.4f}")
print()
print("few-sample cells scatter: the trace adds t independent phases, so")
print("per-trial risk has spread ~ r^2/d^2 until t washes it out")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
emit_csv(records, out / "records.csv")
emit_summary_csv(summaries, out / "summary.csv")
emit_plot(records, out / "plot.svg")
print()
print(f"wrote records.csv, summary.csv, plot.svg -> {out}")
