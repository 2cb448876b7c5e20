"""3SAT formulas: DIMACS I/O, clause classification, balanced generation, MAX-3SAT oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import generator, mix

MAX_BRUTE_FORCE_VARS = 25
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Literal:
    variable: int
    negated: bool = False

    def __post_init__(self):
        if self.variable < 1:
            raise ValueError(f"variable index must be >= 1, got {self.variable}")

    @classmethod
    def from_dimacs(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a DIMACS literal")
        return cls(abs(lit), lit < 0)

    def to_dimacs(self) -> int:
        return -self.variable if self.negated else self.variable

    def value(self, bits: Sequence[int]) -> bool:
        v = bool(bits[self.variable - 1])
        return (not v) if self.negated else v


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(self.literals)
        if len(lits) != 3:
            raise ValueError(f"a clause needs exactly 3 literals, got {len(lits)}")
        variables = [lit.variable for lit in lits]
        if len(set(variables)) != 3:
            raise ValueError(f"clause variables must be pairwise distinct: {variables}")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def from_dimacs(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_dimacs(l) for l in lits))

    def variables(self) -> tuple[int, int, int]:
        return tuple(lit.variable for lit in self.literals)

    def is_satisfied(self, bits: Sequence[int]) -> bool:
        return any(lit.value(bits) for lit in self.literals)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        clauses = tuple(self.clauses)
        for clause in clauses:
            worst = max(clause.variables())
            if worst > self.num_vars:
                raise ValueError(f"variable {worst} exceeds num_vars={self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def clause_of(*lits: int) -> Clause:
    """Build a clause from DIMACS-style signed integers, e.g. clause_of(1, 2, -3)."""
    return Clause.from_dimacs(lits)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text into a formula of 3-literal clauses."""
    if hasattr(text, "read"):
        text = text.read()
    num_vars = num_clauses = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ValueError(f"line {lineno}: duplicate problem header")
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed header {line!r}") from None
            if num_vars < 1 or num_clauses < 0:
                raise ValueError(f"line {lineno}: invalid header counts {line!r}")
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer clause token") from None

    if num_vars is None:
        raise ValueError("missing 'p cnf' header")

    clauses = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if len(current) != 3:
                raise ValueError(f"clause {len(clauses) + 1} has {len(current)} literals, expected 3")
            for lit in current:
                if abs(lit) > num_vars:
                    raise ValueError(f"variable {abs(lit)} exceeds declared num_vars={num_vars}")
            clauses.append(Clause.from_dimacs(current))
            current = []
        else:
            current.append(tok)
    if current:
        raise ValueError("unterminated clause (missing trailing 0)")
    if len(clauses) != num_clauses:
        raise ValueError(f"header declares {num_clauses} clauses but {len(clauses)} were read")
    return CnfFormula(num_vars, tuple(clauses))


def write_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    """Serialize a formula to DIMACS CNF; parse_dimacs(write_dimacs(f)) == f."""
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit.to_dimacs()) for lit in clause.literals) + " 0")
    return "\n".join(lines) + "\n"


def classify_clause(clause: Clause) -> tuple[int, tuple[int, int, int]]:
    """Clause type (number of negations) and canonical variable order.

    Non-negated variables come first, negated ones last, each group keeping
    the clause's own literal order. Pattern tables are written for clauses in
    this canonical shape.
    """
    plain = [lit.variable for lit in clause.literals if not lit.negated]
    negated = [lit.variable for lit in clause.literals if lit.negated]
    return len(negated), tuple(plain + negated)


def clause_penalty(clause_type: int, bits: Sequence[int]) -> int:
    """Pseudo-Boolean penalty of the canonical clause of a type: -1 if satisfied, 0 if not."""
    if clause_type not in (0, 1, 2, 3):
        raise ValueError(f"clause type must be 0..3, got {clause_type}")
    x, y, z = (int(b) for b in bits)
    if clause_type == 0:
        return -x - y - z + x * y + x * z + y * z - x * y * z
    if clause_type == 1:
        return -1 + z - x * z - y * z + x * y * z
    if clause_type == 2:
        return -1 + y * z - x * y * z
    return -1 + x * y * z


def count_satisfied(formula: CnfFormula, bits: Sequence[int]) -> int:
    """Number of clauses with at least one true literal under the assignment."""
    if len(bits) != formula.num_vars:
        raise ValueError(f"assignment length {len(bits)} != num_vars {formula.num_vars}")
    return sum(1 for clause in formula.clauses if clause.is_satisfied(bits))


def clause_arrays(formula: CnfFormula) -> tuple[np.ndarray, np.ndarray]:
    """(m, 3) arrays of 0-based variable indices and negation flags."""
    m = formula.num_clauses
    variables = np.zeros((m, 3), dtype=np.int64)
    negated = np.zeros((m, 3), dtype=bool)
    for ci, clause in enumerate(formula.clauses):
        for li, lit in enumerate(clause.literals):
            variables[ci, li] = lit.variable - 1
            negated[ci, li] = lit.negated
    return variables, negated


def count_satisfied_many(formula: CnfFormula, bits_rows: np.ndarray) -> np.ndarray:
    """Vectorized count_satisfied over rows of a (k, num_vars) 0/1 matrix."""
    rows = np.asarray(bits_rows, dtype=bool)
    if rows.ndim != 2 or rows.shape[1] != formula.num_vars:
        raise ValueError(f"expected shape (k, {formula.num_vars}), got {rows.shape}")
    if formula.num_clauses == 0:
        return np.zeros(rows.shape[0], dtype=np.int64)
    variables, negated = clause_arrays(formula)
    truth = rows[:, variables] ^ negated[None, :, :]
    return truth.any(axis=2).sum(axis=1).astype(np.int64)


class _GeneratorStuck(Exception):
    pass


def _balanced_attempt(num_vars: int, num_clauses: int,
                      rng: np.random.Generator) -> tuple[Clause, ...]:
    occurrences = np.zeros(num_vars, dtype=np.int64)
    positive = np.zeros(num_vars, dtype=np.int64)
    negative = np.zeros(num_vars, dtype=np.int64)
    seen: set[tuple[tuple[int, bool], ...]] = set()
    clauses: list[Clause] = []
    max_redraws = 200
    for _ in range(num_clauses):
        for _ in range(max_redraws):
            jitter = rng.permutation(num_vars)
            order = np.lexsort((jitter, occurrences))
            chosen = [int(v) for v in order[:3]]
            lits = []
            for v in chosen:
                if positive[v] < negative[v]:
                    neg = False
                elif negative[v] < positive[v]:
                    neg = True
                else:
                    neg = bool(rng.integers(0, 2))
                lits.append((v, neg))
            key = tuple(sorted(lits))
            if key not in seen:
                break
        else:
            raise _GeneratorStuck(len(clauses) + 1)
        seen.add(key)
        for v, neg in lits:
            occurrences[v] += 1
            if neg:
                negative[v] += 1
            else:
                positive[v] += 1
        clauses.append(Clause(tuple(Literal(v + 1, neg) for v, neg in lits)))
    return tuple(clauses)


def generate_balanced(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    """Random 3SAT instance with balanced variable occurrences and polarities.

    Greedy construction: each clause takes the three least-used distinct
    variables (seeded tie-break), each literal takes its variable's currently
    rarer polarity (seeded tie-break), and clauses duplicating an earlier
    variable set with identical polarities are redrawn. Occurrence counts
    stay within a spread of 1 across variables, as do per-variable polarity
    counts. A clause can become fully forced (no ties left to redraw); when
    that forced clause is a duplicate, the whole construction restarts with a
    re-derived seed, keeping the result a pure function of (n, m, seed).
    """
    if num_vars < 3:
        raise ValueError(f"balanced generation needs num_vars >= 3, got {num_vars}")
    if num_clauses < 0:
        raise ValueError("num_clauses must be non-negative")
    max_restarts = 50
    for restart in range(max_restarts):
        rng = generator(seed if restart == 0 else mix(seed, 0xBA1A, restart))
        try:
            clauses = _balanced_attempt(num_vars, num_clauses, rng)
        except _GeneratorStuck:
            continue
        return CnfFormula(num_vars, clauses)
    raise ValueError(
        f"balance or distinctness unsatisfiable for num_vars={num_vars}, "
        f"num_clauses={num_clauses} (gave up after {max_restarts} restarts)"
    )


def assignment_bits(index: int, num_vars: int) -> tuple[int, ...]:
    """Assignment encoded by an integer, variable 1 as the least-significant bit."""
    return tuple((index >> i) & 1 for i in range(num_vars))


def brute_force_maxsat(formula: CnfFormula) -> tuple[int, tuple[int, ...]]:
    """Exact MAX-3SAT by enumeration; witness is the lowest-value optimum.

    Assignments are ordered by their binary value with variable 1 as the
    least-significant bit.
    """
    n = formula.num_vars
    if n > MAX_BRUTE_FORCE_VARS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_FORCE_VARS} variables, got {n}")
    variables, negated = clause_arrays(formula)
    best_count = -1
    best_index = 0
    total = 1 << n
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        rows = ((idx[:, None] >> np.arange(n)) & 1).astype(bool)
        if formula.num_clauses:
            truth = rows[:, variables] ^ negated[None, :, :]
            counts = truth.any(axis=2).sum(axis=1)
        else:
            counts = np.zeros(stop - start, dtype=np.int64)
        chunk_best = int(counts.max())
        if chunk_best > best_count:
            best_count = chunk_best
            best_index = start + int(np.argmax(counts))
    return best_count, assignment_bits(best_index, n)
