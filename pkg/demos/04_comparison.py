"""Head-to-head: 3x3 approximation vs exact transformations vs random guessing.

Every method solves the same balanced instances with the same tabu budget.
The approximation works on n-dimensional matrices instead of (n+m)-dimensional
ones, so the same budget goes much further; random guessing lands near 7/8
of the clauses and serves as the zero point.
"""


from maxsat_qubo import ExperimentConfig, SolverConfig, run_comparison

config = ExperimentConfig(
    kind="comparison",
    count=5,
    num_vars=72,
    num_clauses=248,
    seed=2024,
    transforms=("fullapprox", "chancellor_repaired", "nuesslein"),
    solver=SolverConfig(kind="tabu", samples=50, seed=0, iteration_limit=1200),
)

records, summary = run_comparison(config)

print(f"{config.count} formulas, n={config.num_vars}, m={config.num_clauses}, "
      f"best-of-{config.solver.samples} tabu\n")

bests = {}
for row in summary:
    if row.kind == "best":
        bests.setdefault(row.method, []).append(row.value)
print("method               per-formula best-of-k")
for method, values in bests.items():
    print(f"{method:20s} {values}")

print("\nmeans:")
for row in summary:
    if row.kind == "mean":
        print(f"  {row.method:20s} {row.value:.1f}")

print("\npairwise best-of-k differences (method A minus method B, per formula):")
diffs = {}
for row in summary:
    if row.kind == "diff":
        diffs.setdefault((row.method, row.other), []).append(row.value)
for (a, b), values in diffs.items():
    print(f"  {a} - {b}: {values}")

print("\nbaseline-relative improvement rows (random guessing as zero point):")
for row in summary:
    if row.kind == "improvement":
        print(f"  {row.method} over {row.other} on formula {row.formula_id}: "
              f"{row.value:+.2f}")
