"""Scaling behavior of the approximation on larger instances.

The matrices stay n-dimensional while exact transformations grow to n + m, so
classical tabu search keeps finding high-quality assignments as formulas grow.
The run below is desk-scale; raise count/num_clauses for a longer study.
"""

from maxsat_qubo import ExperimentConfig, SolverConfig, run_scaling
from maxsat_qubo.transform import assemble, builtin_spec
from maxsat_qubo.formula import generate_balanced

config = ExperimentConfig(
    kind="scaling",
    count=3,
    num_vars=139,
    num_clauses=500,
    seed=7,
    transforms=("fullapprox", "chancellor_repaired", "nuesslein"),
    solver=SolverConfig(kind="tabu", samples=15, seed=0, iteration_limit=2500),
)

formula = generate_balanced(config.num_vars, config.num_clauses, 0)
for name in config.transforms:
    matrix, _ = assemble(formula, builtin_spec(name))
    print(f"{name:20s} QUBO dimension {matrix.dim}")

print(f"\nrunning {config.count} instances, n={config.num_vars}, "
      f"m={config.num_clauses}, best-of-{config.solver.samples} tabu...\n")
records, summary = run_scaling(config)

print("mean fraction of clauses satisfied (best-of-k per formula):")
for row in summary:
    print(f"  {row.method:20s} {row.value:.3f}")
