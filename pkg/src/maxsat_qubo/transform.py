"""Clause-level QUBO patterns, verification and repair, and formula-to-QUBO assembly."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .formula import CnfFormula, classify_clause
from .qubo import QuboMatrix, VariableLayout

EXACT_ALL_7 = "exact-all-7"
APPROX_6_OF_7 = "approx-6-of-7"

BUILTIN_SPEC_NAMES = ("chancellor_printed", "chancellor_repaired", "nuesslein", "fullapprox")

# all 8 assignments to a clause's variables, ordered by (x1, x2, x3)
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(
    (a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)
)


def unsat_triple(clause_type: int) -> tuple[int, int, int]:
    """The single assignment falsifying the canonical clause of a type."""
    if clause_type not in (0, 1, 2, 3):
        raise ValueError(f"clause type must be 0..3, got {clause_type}")
    return tuple([0] * (3 - clause_type) + [1] * clause_type)


def satisfying_triples(clause_type: int) -> tuple[tuple[int, int, int], ...]:
    bad = unsat_triple(clause_type)
    return tuple(t for t in TRIPLES if t != bad)


@dataclass(frozen=True)
class ClausePattern:
    """A 3x3 or 4x4 upper-triangular coefficient template for one clause.

    Slots 0..2 are the clause's canonically ordered variables; slot 3, when
    present, is the clause's auxiliary variable.
    """

    dim: int
    coefficients: dict[tuple[int, int], int]

    def __post_init__(self):
        if self.dim not in (3, 4):
            raise ValueError(f"pattern dim must be 3 or 4, got {self.dim}")
        checked = {}
        for key, value in self.coefficients.items():
            i, j = int(key[0]), int(key[1])
            if not (0 <= i <= j < self.dim):
                raise ValueError(f"slot pair {key} outside upper triangle of dim {self.dim}")
            value = int(value)
            if value:
                checked[(i, j)] = value
        object.__setattr__(self, "coefficients", checked)

    @property
    def uses_aux(self) -> bool:
        return self.dim == 4


@dataclass(frozen=True)
class TransformSpec:
    """One clause pattern per clause type; defines a full formula-to-QUBO transformation."""

    name: str
    patterns: tuple[ClausePattern, ClausePattern, ClausePattern, ClausePattern]
    uses_aux: bool

    def __post_init__(self):
        patterns = tuple(self.patterns)
        if len(patterns) != 4:
            raise ValueError("a spec needs one pattern per clause type (4 patterns)")
        dims = {p.dim for p in patterns}
        if len(dims) != 1:
            raise ValueError(f"patterns mix dimensions: {sorted(dims)}")
        if (dims.pop() == 4) != self.uses_aux:
            raise ValueError("uses_aux flag contradicts pattern dimension")
        object.__setattr__(self, "patterns", patterns)


@dataclass(frozen=True)
class VerificationReport:
    clause_type: int
    criterion: str
    valid: bool
    min_energy: int
    minima: tuple[tuple[int, int, int], ...]
    unsat_energy: int


def pattern_energies(pattern: ClausePattern) -> np.ndarray:
    """Energies of the 8 variable triples, minimizing over the aux bit for 4x4 patterns."""
    values = np.zeros(8, dtype=np.int64)
    if pattern.dim == 3:
        for idx, triple in enumerate(TRIPLES):
            total = 0
            for (i, j), c in pattern.coefficients.items():
                total += c * triple[i] if i == j else c * triple[i] * triple[j]
            values[idx] = total
    else:
        for idx, triple in enumerate(TRIPLES):
            best = None
            for aux in (0, 1):
                bits = triple + (aux,)
                total = 0
                for (i, j), c in pattern.coefficients.items():
                    total += c * bits[i] if i == j else c * bits[i] * bits[j]
                if best is None or total < best:
                    best = total
            values[idx] = best
    return values


def pattern_minima(pattern: ClausePattern) -> tuple[tuple[int, int, int], ...]:
    """Triples attaining the pattern's minimum energy (aux minimized out)."""
    values = pattern_energies(pattern)
    low = values.min()
    return tuple(TRIPLES[i] for i in range(8) if values[i] == low)


def verify_pattern(pattern: ClausePattern, clause_type: int, criterion: str) -> VerificationReport:
    """Exhaustively check a pattern against a clause type.

    exact-all-7: all seven satisfying triples share the minimum and the
    falsifying triple sits strictly above it. approx-6-of-7: exactly six
    satisfying triples share the minimum while the leftover satisfying triple
    and the falsifying triple both sit strictly above it.
    """
    if criterion not in (EXACT_ALL_7, APPROX_6_OF_7):
        raise ValueError(f"unknown criterion {criterion!r}")
    values = pattern_energies(pattern)
    low = int(values.min())
    minima = tuple(TRIPLES[i] for i in range(8) if values[i] == low)
    bad = unsat_triple(clause_type)
    unsat_energy = int(values[TRIPLES.index(bad)])
    sat_at_min = sum(1 for t in minima if t != bad)
    if criterion == EXACT_ALL_7:
        valid = sat_at_min == 7 and unsat_energy > low
    else:
        valid = sat_at_min == 6 and bad not in minima
    return VerificationReport(clause_type, criterion, valid, low, minima, unsat_energy)


def negation_substitute(base: ClausePattern, mask: Sequence[bool]) -> ClausePattern:
    """Rewrite a type-0 4x4 pattern for negated slots by substituting x -> 1 - x.

    The masked variable slots are replaced symbolically, coefficients are
    re-collected, and the leftover constant is dropped. The result must pass
    exact-all-7 for the clause type given by the mask's popcount; a failure
    means the base pattern was not a valid type-0 transformation.
    """
    if base.dim != 4:
        raise ValueError("negation substitution is defined for 4x4 patterns")
    mask = tuple(bool(b) for b in mask)
    if len(mask) != 3:
        raise ValueError("mask must cover the three variable slots")
    if not verify_pattern(base, 0, EXACT_ALL_7).valid:
        raise ValueError("base pattern does not pass exact-all-7 for clause type 0")

    linear = {i: c for (i, j), c in base.coefficients.items() if i == j}
    bilinear = {(i, j): c for (i, j), c in base.coefficients.items() if i < j}
    for slot in (s for s in range(3) if mask[s]):
        new_linear = dict(linear)
        new_bilinear = dict(bilinear)
        if slot in linear:
            new_linear[slot] = -linear[slot]
        for (i, j), c in bilinear.items():
            if slot in (i, j):
                other = j if i == slot else i
                new_linear[other] = new_linear.get(other, 0) + c
                new_bilinear[(i, j)] = -c
        linear, bilinear = new_linear, new_bilinear

    coefficients: dict[tuple[int, int], int] = {(i, i): c for i, c in linear.items()}
    coefficients.update(bilinear)
    result = ClausePattern(4, coefficients)
    clause_type = sum(mask)
    if not verify_pattern(result, clause_type, EXACT_ALL_7).valid:
        raise ValueError(f"substituted pattern fails exact-all-7 for clause type {clause_type}")
    return result


_CHANCELLOR_PRINTED = (
    {(0, 0): -2, (1, 1): -2, (2, 2): -2, (3, 3): -2,
     (0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1},
    {(0, 0): -1, (1, 1): -1, (3, 3): -1, (0, 1): 1, (0, 3): 1, (1, 3): 1},
    {(0, 0): -1, (1, 1): -1, (2, 2): -1, (3, 3): 2,
     (0, 3): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1},
    {(0, 0): -1, (1, 1): -1, (2, 2): -1, (3, 3): -1,
     (0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1},
)

_NUESSLEIN = (
    {(0, 1): 2, (0, 3): -2, (1, 3): -2, (2, 2): -1, (2, 3): 1, (3, 3): 1},
    {(0, 1): 2, (0, 3): -2, (1, 3): -2, (2, 2): 1, (2, 3): -1, (3, 3): 2},
    {(0, 0): 2, (0, 1): -2, (0, 3): -2, (1, 3): 2, (2, 2): 1, (2, 3): -1},
    {(0, 0): -1, (1, 1): -1, (2, 2): -1, (3, 3): -1,
     (0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1},
)

_FULLAPPROX = (
    {(0, 0): -1, (1, 1): -1, (2, 2): -1, (0, 1): 1, (0, 2): 1, (1, 2): 1},
    {(0, 1): 1, (0, 2): -1, (1, 2): -1, (2, 2): 1},
    {(0, 0): 1, (0, 1): -1, (0, 2): -1, (1, 2): 1},
    {(0, 0): -1, (1, 1): -1, (2, 2): -1, (0, 1): 1, (0, 2): 1, (1, 2): 1},
)


@lru_cache(maxsize=None)
def builtin_spec(name: str) -> TransformSpec:
    """One of the built-in transformations.

    chancellor_printed carries the published coefficients verbatim, two of
    which fail verification; chancellor_repaired rebuilds the negated clause
    types from the valid type-0 pattern by negation substitution.
    """
    if name == "chancellor_printed":
        patterns = tuple(ClausePattern(4, dict(c)) for c in _CHANCELLOR_PRINTED)
        return TransformSpec(name, patterns, uses_aux=True)
    if name == "chancellor_repaired":
        base = ClausePattern(4, dict(_CHANCELLOR_PRINTED[0]))
        masks = ((False, False, False), (False, False, True),
                 (False, True, True), (True, True, True))
        patterns = tuple(negation_substitute(base, mask) for mask in masks)
        return TransformSpec(name, patterns, uses_aux=True)
    if name == "nuesslein":
        patterns = tuple(ClausePattern(4, dict(c)) for c in _NUESSLEIN)
        return TransformSpec(name, patterns, uses_aux=True)
    if name == "fullapprox":
        patterns = tuple(ClausePattern(3, dict(c)) for c in _FULLAPPROX)
        return TransformSpec(name, patterns, uses_aux=False)
    raise ValueError(f"unknown transformation {name!r}, expected one of {BUILTIN_SPEC_NAMES}")


def _add_pattern(accumulated: dict, pattern: ClausePattern, slots: Sequence[int]) -> None:
    for (i, j), value in pattern.coefficients.items():
        a, b = slots[i], slots[j]
        if a > b:
            a, b = b, a
        key = (a, b)
        accumulated[key] = accumulated.get(key, 0) + value


def assemble(formula: CnfFormula, spec: TransformSpec) -> tuple[QuboMatrix, VariableLayout]:
    """Sum instantiated clause patterns into one QUBO matrix.

    Each clause's pattern lands on its canonically ordered variables; specs
    with auxiliary slots bind clause l's aux to index n + l. Coefficients
    that cancel to zero are not stored.
    """
    n = formula.num_vars
    m = formula.num_clauses
    dim = n + m if spec.uses_aux else n
    accumulated: dict[tuple[int, int], int] = {}
    for ci, clause in enumerate(formula.clauses):
        clause_type, order = classify_clause(clause)
        slots = [v - 1 for v in order]
        if spec.uses_aux:
            slots.append(n + ci)
        _add_pattern(accumulated, spec.patterns[clause_type], slots)
    layout = VariableLayout(n, tuple(range(m)) if spec.uses_aux else ())
    return QuboMatrix.from_accumulated(dim, accumulated), layout


def approximate_with_hint(formula: CnfFormula, hint: Sequence[int],
                          approx_sets: Sequence[Sequence[ClausePattern]]) -> QuboMatrix:
    """Assemble a 3x3-pattern approximation in which the hint stays optimal.

    Every clause the hint satisfies gets the first pattern from its type's
    list whose minima include the hint's restriction; clauses the hint
    falsifies get their type's first pattern. Each per-type list must jointly
    cover all seven satisfying triples, which guarantees a choice exists.
    """
    if len(hint) != formula.num_vars:
        raise ValueError(f"hint length {len(hint)} != num_vars {formula.num_vars}")
    if len(approx_sets) != 4:
        raise ValueError("approx_sets must hold one pattern list per clause type")
    minima_per_type: list[list[set]] = []
    for clause_type, patterns in enumerate(approx_sets):
        if not patterns:
            raise ValueError(f"no approximation patterns for clause type {clause_type}")
        if any(p.dim != 3 for p in patterns):
            raise ValueError("hint-preserving assembly expects 3x3 patterns")
        minima = [set(pattern_minima(p)) for p in patterns]
        covered = set().union(*minima)
        missing = [t for t in satisfying_triples(clause_type) if t not in covered]
        if missing:
            raise ValueError(
                f"clause type {clause_type} patterns do not cover satisfying triples {missing}"
            )
        minima_per_type.append(minima)

    accumulated: dict[tuple[int, int], int] = {}
    for clause in formula.clauses:
        clause_type, order = classify_clause(clause)
        slots = [v - 1 for v in order]
        triple = tuple(int(hint[v - 1]) for v in order)
        choice = 0
        if triple != unsat_triple(clause_type):
            choice = next(i for i, mins in enumerate(minima_per_type[clause_type])
                          if triple in mins)
        _add_pattern(accumulated, approx_sets[clause_type][choice], slots)
    return QuboMatrix.from_accumulated(formula.num_vars, accumulated)


def decode(bits: Sequence[int], layout: VariableLayout) -> tuple[int, ...]:
    """Project a solver bit vector onto the problem variables."""
    if len(bits) != layout.dim:
        raise ValueError(f"bit vector length {len(bits)} != layout dim {layout.dim}")
    return tuple(int(b) for b in bits[:layout.num_problem_vars])


def write_pattern(pattern: ClausePattern, clause_type: int, comments: Sequence[str] = ()) -> str:
    """Serialize a pattern to the pattern text format."""
    if clause_type not in (0, 1, 2, 3):
        raise ValueError(f"clause type must be 0..3, got {clause_type}")
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p pattern {pattern.dim} {clause_type} {len(pattern.coefficients)}")
    for (i, j) in sorted(pattern.coefficients):
        lines.append(f"{i} {j} {pattern.coefficients[(i, j)]}")
    return "\n".join(lines) + "\n"


def parse_pattern(text: str) -> tuple[ClausePattern, int]:
    """Parse pattern text into (pattern, clause_type)."""
    if hasattr(text, "read"):
        text = text.read()
    header = None
    coefficients: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 5 or fields[1] != "pattern":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            header = tuple(int(f) for f in fields[2:])
            continue
        if header is None:
            raise ValueError(f"line {lineno}: entry before 'p pattern' header")
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'i j coeff', got {line!r}")
        i, j, value = (int(f) for f in fields)
        if (i, j) in coefficients:
            raise ValueError(f"line {lineno}: duplicate entry ({i}, {j})")
        coefficients[(i, j)] = value
    if header is None:
        raise ValueError("missing 'p pattern' header")
    dim, clause_type, declared = header
    if len(coefficients) != declared:
        raise ValueError(f"header declares {declared} entries but {len(coefficients)} were read")
    if clause_type not in (0, 1, 2, 3):
        raise ValueError(f"clause type must be 0..3, got {clause_type}")
    return ClausePattern(dim, coefficients), clause_type


_MANIFEST = "manifest.json"


def write_spec_bundle(spec: TransformSpec, directory: str) -> None:
    """Write a spec as four pattern files plus a manifest naming them."""
    os.makedirs(directory, exist_ok=True)
    files = {}
    for clause_type, pattern in enumerate(spec.patterns):
        filename = f"type{clause_type}.pattern"
        with open(os.path.join(directory, filename), "w", encoding="utf-8") as fh:
            fh.write(write_pattern(pattern, clause_type))
        files[str(clause_type)] = filename
    manifest = {"name": spec.name, "uses_aux": spec.uses_aux, "patterns": files}
    with open(os.path.join(directory, _MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def read_spec_bundle(directory: str) -> TransformSpec:
    """Load a spec bundle written by write_spec_bundle."""
    with open(os.path.join(directory, _MANIFEST), encoding="utf-8") as fh:
        manifest = json.load(fh)
    patterns = []
    for clause_type in range(4):
        filename = manifest["patterns"][str(clause_type)]
        with open(os.path.join(directory, filename), encoding="utf-8") as fh:
            pattern, stored_type = parse_pattern(fh.read())
        if stored_type != clause_type:
            raise ValueError(f"{filename} stores clause type {stored_type}, expected {clause_type}")
        patterns.append(pattern)
    return TransformSpec(manifest["name"], tuple(patterns), bool(manifest["uses_aux"]))
