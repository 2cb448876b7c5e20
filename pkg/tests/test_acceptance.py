"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. The heavy criteria (8-10)
use fixed solver budgets chosen so the whole module finishes in a few
minutes; all thresholds below are asserted exactly as stated.
"""


import numpy as np

from maxsat_qubo.formula import (
    brute_force_maxsat,
    count_satisfied,
    count_satisfied_many,
    generate_balanced,
    parse_dimacs,
    write_dimacs,
)
from maxsat_qubo.harness import ExperimentConfig, records_to_jsonl, run_comparison, summary_to_csv
from maxsat_qubo.pattern_search import coverage_check, search_3x3
from maxsat_qubo.qubo import (
    brute_force_min,
    energy,
    minimize_with_aux,
    parse_qubo,
    pruning_schedule,
    write_qubo,
)
from maxsat_qubo.rng import generator, mix
from maxsat_qubo.solvers import SolverConfig, random_baseline, solve
from maxsat_qubo.transform import (
    APPROX_6_OF_7,
    EXACT_ALL_7,
    approximate_with_hint,
    assemble,
    builtin_spec,
    unsat_triple,
    verify_pattern,
)

from conftest import planted_formula, random_formula


def _report(number: int, description: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"criterion {number:2d} {status}: {description}")
    for failure in failures:
        print(f"    {failure}")
    assert not failures


def test_criterion_01_pattern_verification():
    failures = []
    nuesslein = builtin_spec("nuesslein")
    for t in range(4):
        if not verify_pattern(nuesslein.patterns[t], t, EXACT_ALL_7).valid:
            failures.append(f"nuesslein type {t} fails exact-all-7")
    fullapprox = builtin_spec("fullapprox")
    for t in range(4):
        report = verify_pattern(fullapprox.patterns[t], t, APPROX_6_OF_7)
        if not report.valid:
            failures.append(f"fullapprox type {t} fails approx-6-of-7")
        elif len([m for m in report.minima if m != unsat_triple(t)]) != 6:
            failures.append(f"fullapprox type {t} does not have exactly 6 satisfying minima")
    printed = builtin_spec("chancellor_printed")
    expected = {0: True, 1: False, 2: False, 3: True}
    for t in range(4):
        if verify_pattern(printed.patterns[t], t, EXACT_ALL_7).valid != expected[t]:
            failures.append(f"chancellor_printed type {t} verification "
                            f"!= expected {expected[t]}")
    repaired = builtin_spec("chancellor_repaired")
    for t in range(4):
        report = verify_pattern(repaired.patterns[t], t, EXACT_ALL_7)
        if not report.valid:
            failures.append(f"chancellor_repaired type {t} fails exact-all-7")
        elif report.unsat_energy - report.min_energy != 1:
            failures.append(f"chancellor_repaired type {t} gap != 1")
    _report(1, "built-in pattern verification profile", failures)


def test_criterion_02_no_exact_3x3_patterns():
    failures = []
    for values in ((-1, 0, 1), (-2, -1, 0, 1, 2)):
        for t in range(4):
            found = search_3x3(values, t, EXACT_ALL_7)
            if found:
                failures.append(f"S={values} type {t}: {len(found)} exact 3x3 patterns exist")
    _report(2, "exhaustive search finds no exact 3x3 pattern", failures)


def test_criterion_03_approximation_discovery():
    failures = []
    for t in range(4):
        patterns = search_3x3((-1, 0, 1), t, APPROX_6_OF_7)
        if len(patterns) != 4:
            failures.append(
                f"DISCREPANCY type {t}: found {len(patterns)} approximations, expected 4; "
                f"coefficients: {[sorted(p.coefficients.items()) for p in patterns]}")
        if builtin_spec("fullapprox").patterns[t] not in patterns:
            failures.append(f"type {t}: published approximation not in search results")
    _report(3, "search finds 4 approximations per type incl. the published ones", failures)


def test_criterion_04_coverage():
    failures = []
    for t in range(4):
        patterns = search_3x3((-1, 0, 1), t, APPROX_6_OF_7)
        covered, witnesses = coverage_check(patterns, t)
        if not covered:
            missing = [i for i, w in enumerate(witnesses) if w is None]
            failures.append(f"type {t}: satisfying triples {missing} uncovered")
    _report(4, "every satisfying triple attains a minimum in some found pattern", failures)


def test_criterion_05_oracle_equivalence():
    failures = []
    rng = generator(505)
    for trial in range(200):
        n = int(rng.integers(4, 11))
        m = int(rng.integers(5, 41))
        formula = random_formula(n, m, int(rng.integers(0, 2**31)))
        best, _ = brute_force_maxsat(formula)
        for name in ("nuesslein", "chancellor_repaired"):
            matrix, layout = assemble(formula, builtin_spec(name))
            _, witness = minimize_with_aux(matrix, layout)
            achieved = count_satisfied(formula, witness)
            if achieved != best:
                failures.append(f"trial {trial} {name}: decoded {achieved} != oracle {best}")
    _report(5, "exact transformations recover the MAX-3SAT optimum on 200 formulas",
            failures)


def test_criterion_06_hint_construction():
    failures = []
    approx_sets = [search_3x3((-1, 0, 1), t, APPROX_6_OF_7) for t in range(4)]
    rng = generator(606)
    for trial in range(100):
        n = int(rng.integers(4, 13))
        m = int(rng.integers(5, 41))
        formula, witness = planted_formula(n, m, int(rng.integers(0, 2**31)))
        matrix = approximate_with_hint(formula, witness, approx_sets)
        best, _ = brute_force_min(matrix)
        if energy(matrix, witness) != best:
            failures.append(f"trial {trial}: hint energy {energy(matrix, witness)} != "
                            f"minimum {best} (n={n}, m={m})")
    _report(6, "hint-preserving approximation keeps the hint at minimum energy", failures)


def test_criterion_07_random_baseline_statistics():
    failures = []
    single_means = []
    best_means = []
    for f in range(100):
        formula = generate_balanced(145, 500, mix(707, f))
        counts = np.array([c for _, c in random_baseline(formula, 1000, mix(707, 4, f))])
        single_means.append(counts.mean())
        best_means.append(counts.max())
    single = float(np.mean(single_means))
    best = float(np.mean(best_means))
    if not 0.855 * 500 <= single <= 0.895 * 500:
        failures.append(f"mean single-assignment satisfied {single:.2f} outside "
                        f"[{0.855 * 500}, {0.895 * 500}]")
    if not 445 <= best <= 465:
        failures.append(f"mean best-of-1000 {best:.2f} outside [445, 465]")
    _report(7, f"random baseline: single mean {single:.1f}, best-of-1000 mean {best:.1f}",
            failures)


def test_criterion_08_pruning_decline():
    failures = []
    sa = dict(kind="sa", samples=50, sa_sweeps=60)
    stage_means = {}
    for name in ("nuesslein", "chancellor_repaired"):
        spec = builtin_spec(name)
        bests = {(s, k): [] for s in ("min", "random") for k in (0, 1)}
        for f in range(20):
            formula = generate_balanced(58, 200, mix(808, 1, f))
            matrix, layout = assemble(formula, spec)
            for strategy in ("min", "random"):
                stages = pruning_schedule(matrix, strategy, mix(808, 2, f, name))
                for stage in stages[:2]:
                    config = SolverConfig(seed=mix(808, 3, f, name, stage.stage), **sa)
                    results = solve(stage.matrix, config)
                    bits = np.asarray([r.bits for r in results])[:, :58]
                    bests[(strategy, stage.stage)].append(
                        int(count_satisfied_many(formula, bits).max()))
        for strategy in ("min", "random"):
            s0 = float(np.mean(bests[(strategy, 0)]))
            s1 = float(np.mean(bests[(strategy, 1)]))
            stage_means[(name, strategy)] = (s0, s1)
            if not s1 < s0:
                failures.append(f"{name}/{strategy}: stage1 mean {s1:.2f} not below "
                                f"stage0 mean {s0:.2f}")
    summary = "; ".join(f"{n}/{s}: {a:.1f}->{b:.1f}"
                        for (n, s), (a, b) in stage_means.items())
    _report(8, f"pruning 10% of entries immediately hurts ({summary})", failures)


def test_criterion_09_comparison_direction():
    failures = []
    k, iters = 100, 2000
    bests = {name: [] for name in ("fullapprox", "chancellor_repaired", "nuesslein",
                                   "random")}
    for f in range(20):
        formula = generate_balanced(145, 500, mix(909, 1, f))
        for name in ("fullapprox", "chancellor_repaired", "nuesslein"):
            matrix, layout = assemble(formula, builtin_spec(name))
            config = SolverConfig(kind="tabu", samples=k, seed=mix(909, 3, f, name),
                                  iteration_limit=iters)
            results = solve(matrix, config)
            bits = np.asarray([r.bits for r in results])[:, :145]
            bests[name].append(int(count_satisfied_many(formula, bits).max()))
        bests["random"].append(max(c for _, c in
                                   random_baseline(formula, k, mix(909, 4, f))))
    for f in range(20):
        if not bests["fullapprox"][f] > bests["random"][f]:
            failures.append(f"formula {f}: fullapprox {bests['fullapprox'][f]} not above "
                            f"random {bests['random'][f]}")
    means = {name: float(np.mean(values)) for name, values in bests.items()}
    better_exact = max(means["chancellor_repaired"], means["nuesslein"])
    if not (means["fullapprox"] > better_exact or means["fullapprox"] >= better_exact - 2):
        failures.append(f"fullapprox mean {means['fullapprox']:.2f} more than 2 below "
                        f"best exact mean {better_exact:.2f}")
    _report(9, "comparison means " + ", ".join(f"{n}={v:.1f}" for n, v in means.items()),
            failures)


def test_criterion_10_scaling():
    failures = []
    k, iters = 20, 4000
    fractions = []
    for f in range(10):
        formula = generate_balanced(278, 1000, mix(1010, 1, f))
        dims = {}
        for name in ("fullapprox", "chancellor_repaired", "nuesslein"):
            matrix, layout = assemble(formula, builtin_spec(name))
            dims[name] = matrix.dim
            if name != "fullapprox":
                continue
            config = SolverConfig(kind="tabu", samples=k, seed=mix(1010, 3, f, name),
                                  iteration_limit=iters)
            results = solve(matrix, config)
            bits = np.asarray([r.bits for r in results])[:, :278]
            best = int(count_satisfied_many(formula, bits).max())
            fractions.append(best / 1000)
            if best < 960:
                failures.append(f"formula {f}: fullapprox satisfied {best}/1000 < 96%")
        if dims["fullapprox"] != 278:
            failures.append(f"formula {f}: fullapprox dim {dims['fullapprox']} != 278")
        for name in ("chancellor_repaired", "nuesslein"):
            if dims[name] != 1278:
                failures.append(f"formula {f}: {name} dim {dims[name]} != 1278")
    _report(10, f"scaling fractions min {min(fractions):.3f} mean "
            f"{float(np.mean(fractions)):.3f}, dims 278 vs 1278", failures)


def test_criterion_11_determinism_and_roundtrips():
    failures = []

    config = ExperimentConfig(
        kind="comparison", count=2, num_vars=12, num_clauses=36, seed=1111,
        transforms=("fullapprox", "nuesslein"),
        solver=SolverConfig(kind="sa", samples=5, seed=0, sa_sweeps=10))
    records_a, summary_a = run_comparison(config)
    records_b, summary_b = run_comparison(config)
    if records_to_jsonl(records_a) != records_to_jsonl(records_b):
        failures.append("identical configs produced different record bytes")
    if summary_to_csv(summary_a) != summary_to_csv(summary_b):
        failures.append("identical configs produced different summary bytes")

    rng = generator(1112)
    for trial in range(10):
        formula = random_formula(int(rng.integers(4, 12)), int(rng.integers(3, 25)),
                                 int(rng.integers(0, 2**31)))
        if parse_dimacs(write_dimacs(formula)) != formula:
            failures.append(f"DIMACS round-trip failed on trial {trial}")
        matrix, layout = assemble(formula, builtin_spec("nuesslein"))
        reparsed, relayout = parse_qubo(write_qubo(matrix, layout))
        if reparsed != matrix or relayout != layout:
            failures.append(f"QUBO round-trip failed on trial {trial}")

    matrix, _ = assemble(generate_balanced(20, 69, mix(1111, 9)), builtin_spec("nuesslein"))
    for kind, extra in (("tabu", {"iteration_limit": 300}), ("sa", {"sa_sweeps": 15}),
                        ("random", {})):
        for result in solve(matrix, SolverConfig(kind=kind, samples=10, seed=7, **extra)):
            if result.energy != energy(matrix, result.bits):
                failures.append(f"{kind} run {result.run_index}: stored energy "
                                f"{result.energy} != recomputed")
    _report(11, "seed determinism, file round-trips, energy re-verification", failures)
