"""Development: the dictionary keeps what every picture uses.

After each stimulus, features whose share of best matches is at or below
chance (1/F) are disposed. Stored objects are rewritten to use the nearest
surviving features. The features born with the first stimulus form a cohort
that can only shrink.
"""
from cortexwaves.config import ExperimentConfig
from cortexwaves.harness import run_experiment

report = run_experiment(ExperimentConfig(epochs=2))
print("stim  epoch  decision    new+old  survived  cohort  rate")
for rec, row in zip(report.records, report.survival.rows):
    print(f"{rec.index:4d}  {rec.epoch:5d}  {rec.decision:<10}  {row.before:7d}  "
          f"{row.survived:8d}  {row.cohort:6d}  {row.rate:.3f}")

print("\ndisposed per epoch:", report.disposed_per_epoch())
print("\nsurviving features (id, 3x3 rows, uses, stimuli survived):")
for p in report.features.prototypes:
    v = p.vector
    print(f"  {p.id:2d}  {v[0:3]} {v[3:6]} {v[6:9]}  {p.tau:5d}  {p.survived}")
