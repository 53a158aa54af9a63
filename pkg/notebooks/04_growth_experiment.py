"""
Sampled growth of the witness length
====================================

For random words of length n the pipeline bound stays tiny, far below the
C log n ceiling.  Rows are reproducible from the seed alone.
"""

from logwitness.intmat import sanov_generators
from logwitness.pipeline import growth_experiment, log_fit

ns = [10, 100, 1000]
rows = growth_experiment(ns, 10, sanov_generators(), seed=2024)
for row in rows:
    print({k: row[k] for k in ("n", "max_oracle_chi", "max_pipeline_bound", "prime_used_max", "fitted_C")})

fit = log_fit(ns, [row["max_pipeline_bound"] for row in rows])
print(fit)
