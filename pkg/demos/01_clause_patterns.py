"""Tour of the built-in clause patterns: what verifies, what fails, and the repair.

A 3-literal clause is classified by how many of its literals are negated
(type 0..3). Each transformation maps a clause type to a small coefficient
template; summing instantiated templates over all clauses gives the formula's
QUBO. A template is *exact* when all 7 satisfying assignments of the clause
share the minimum energy and the falsifying one sits strictly above it.
"""

from maxsat_qubo import EXACT_ALL_7, APPROX_6_OF_7, builtin_spec, verify_pattern
from maxsat_qubo.transform import TRIPLES, pattern_energies


def show(name, criterion):
    spec = builtin_spec(name)
    print(f"\n=== {name} (criterion: {criterion}) ===")
    for clause_type, pattern in enumerate(spec.patterns):
        report = verify_pattern(pattern, clause_type, criterion)
        status = "ok" if report.valid else "INVALID"
        print(f"type {clause_type}: {status:7s} min={report.min_energy:3d} "
              f"unsat={report.unsat_energy:3d} minima={len(report.minima)}")


show("nuesslein", EXACT_ALL_7)
show("fullapprox", APPROX_6_OF_7)
show("chancellor_printed", EXACT_ALL_7)

print("""
The printed coefficients for one and two negations fail: the one-negation
template decouples the negated variable entirely, and the two-negation
template hands its falsifying assignment the strictly lowest energy.
""")

pattern = builtin_spec("chancellor_printed").patterns[2]
energies = pattern_energies(pattern)
for triple, value in zip(TRIPLES, energies):
    marker = " <- falsifying" if triple == (0, 1, 1) else ""
    print(f"  x={triple} energy={int(value):3d}{marker}")

print("""
Substituting x -> 1 - x into the valid zero-negation template for each
negated slot rebuilds all four types; the repaired set verifies cleanly:
""")
show("chancellor_repaired", EXACT_ALL_7)
