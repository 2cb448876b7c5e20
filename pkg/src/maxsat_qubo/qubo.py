"""Sparse upper-triangular QUBO matrices: energies, exact minimization, pruning, text I/O."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rng import generator

MAX_BRUTE_FORCE_DIM = 25
MAX_AUX_ENUMERATION = 20
_CHUNK = 1 << 16

Entries = dict[tuple[int, int], int]


@dataclass(frozen=True)
class QuboMatrix:
    """x^T Q x with integer coefficients stored as {(i, j): c} for i <= j."""

    dim: int
    entries: Entries

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        checked: Entries = {}
        for key, value in self.entries.items():
            i, j = int(key[0]), int(key[1])
            if not (0 <= i <= j < self.dim):
                raise ValueError(f"entry {key} outside upper triangle of dim {self.dim}")
            value = int(value)
            if value == 0:
                raise ValueError(f"entry {key} stores a zero coefficient")
            checked[(i, j)] = value
        object.__setattr__(self, "entries", checked)

    @classmethod
    def from_accumulated(cls, dim: int, accumulated: Entries) -> "QuboMatrix":
        """Build a matrix from summed coefficients, dropping exact cancellations."""
        return cls(dim, {k: v for k, v in accumulated.items() if v != 0})

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dim, self.dim), dtype=np.int64)
        for (i, j), value in self.entries.items():
            dense[i, j] = value
        return dense

    def diag_coupling(self) -> tuple[np.ndarray, np.ndarray]:
        """(diagonal vector, symmetric off-diagonal coupling matrix)."""
        diag = np.zeros(self.dim, dtype=np.int64)
        coupling = np.zeros((self.dim, self.dim), dtype=np.int32)
        for (i, j), value in self.entries.items():
            if i == j:
                diag[i] = value
            else:
                coupling[i, j] = value
                coupling[j, i] = value
        return diag, coupling


@dataclass(frozen=True)
class VariableLayout:
    """Variable semantics of a matrix: n problem bits then one aux bit per owning clause."""

    num_problem_vars: int
    aux_owners: tuple[int, ...] = ()

    def __post_init__(self):
        if self.num_problem_vars < 0:
            raise ValueError("num_problem_vars must be non-negative")
        object.__setattr__(self, "aux_owners", tuple(int(c) for c in self.aux_owners))

    @property
    def dim(self) -> int:
        return self.num_problem_vars + len(self.aux_owners)


@dataclass(frozen=True)
class PruneStage:
    stage: int
    matrix: QuboMatrix
    removed_cumulative: int


def energy(q: QuboMatrix, bits: Sequence[int]) -> int:
    """Exact integer energy sum(Q_ii x_i) + sum(Q_ij x_i x_j)."""
    if len(bits) != q.dim:
        raise ValueError(f"bit vector length {len(bits)} != dim {q.dim}")
    x = [int(b) for b in bits]
    total = 0
    for (i, j), value in q.entries.items():
        if i == j:
            total += value * x[i]
        else:
            total += value * x[i] * x[j]
    return total


def energy_many(q: QuboMatrix, bits_rows: np.ndarray) -> np.ndarray:
    """Vectorized energy over rows of a (k, dim) 0/1 matrix."""
    rows = np.asarray(bits_rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != q.dim:
        raise ValueError(f"expected shape (k, {q.dim}), got {rows.shape}")
    diag, coupling = q.diag_coupling()
    return rows @ diag + ((rows @ coupling) * rows).sum(axis=1) // 2


def _split_by_layout(q: QuboMatrix, layout: VariableLayout):
    """Problem-block entries, aux diagonal, problem-aux coupling; rejects aux-aux pairs."""
    n = layout.num_problem_vars
    num_aux = len(layout.aux_owners)
    if layout.dim != q.dim:
        raise ValueError(f"layout dim {layout.dim} != matrix dim {q.dim}")
    problem: Entries = {}
    aux_diag = np.zeros(num_aux, dtype=np.int64)
    coupling = np.zeros((n, num_aux), dtype=np.int64)
    has_aux_pair = False
    for (i, j), value in q.entries.items():
        if j < n:
            problem[(i, j)] = value
        elif i < n:
            coupling[i, j - n] += value
        elif i == j:
            aux_diag[i - n] += value
        else:
            has_aux_pair = True
    return problem, aux_diag, coupling, has_aux_pair


def energy_min_aux(q: QuboMatrix, layout: VariableLayout, assignment: Sequence[int]) -> int:
    """Energy of a problem assignment with auxiliary bits minimized out.

    Without aux-aux couplings each aux bit contributes min(0, c) where c is
    its diagonal plus its couplings into the fixed assignment. With aux-aux
    couplings, falls back to enumerating all aux completions (up to 20 bits).
    """
    n = layout.num_problem_vars
    if len(assignment) != n:
        raise ValueError(f"assignment length {len(assignment)} != num_problem_vars {n}")
    problem, aux_diag, coupling, has_aux_pair = _split_by_layout(q, layout)
    x = np.asarray([int(b) for b in assignment], dtype=np.int64)
    num_aux = len(layout.aux_owners)

    if has_aux_pair:
        if num_aux > MAX_AUX_ENUMERATION:
            raise ValueError(
                f"aux-aux couplings present and {num_aux} aux bits exceed "
                f"the enumeration limit of {MAX_AUX_ENUMERATION}"
            )
        best = None
        for aux_index in range(1 << num_aux):
            full = list(assignment) + [(aux_index >> a) & 1 for a in range(num_aux)]
            value = energy(q, full)
            if best is None or value < best:
                best = value
        return int(best)

    base = 0
    for (i, j), value in problem.items():
        base += value * x[i] if i == j else value * x[i] * x[j]
    contributions = aux_diag + x @ coupling
    return int(base + np.minimum(contributions, 0).sum())


def energy_min_aux_many(q: QuboMatrix, layout: VariableLayout, bits_rows: np.ndarray) -> np.ndarray:
    """Vectorized energy_min_aux over rows of a (k, n) 0/1 matrix (no aux-aux couplings)."""
    n = layout.num_problem_vars
    rows = np.asarray(bits_rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != n:
        raise ValueError(f"expected shape (k, {n}), got {rows.shape}")
    problem, aux_diag, coupling, has_aux_pair = _split_by_layout(q, layout)
    if has_aux_pair:
        raise ValueError("vectorized path requires a matrix without aux-aux couplings")
    diag = np.zeros(n, dtype=np.int64)
    sym = np.zeros((n, n), dtype=np.int64)
    for (i, j), value in problem.items():
        if i == j:
            diag[i] = value
        else:
            sym[i, j] = value
            sym[j, i] = value
    base = rows @ diag + ((rows @ sym) * rows).sum(axis=1) // 2
    contributions = aux_diag[None, :] + rows @ coupling
    return base + np.minimum(contributions, 0).sum(axis=1)


def minimize_with_aux(q: QuboMatrix, layout: VariableLayout) -> tuple[int, tuple[int, ...]]:
    """Exact minimum over problem assignments with aux bits minimized out.

    Enumerates the 2^n problem assignments only, so it stays exact for
    matrices whose full dimension is far beyond brute_force_min's reach.
    Witness ties break toward the lowest binary value (variable 1 least
    significant).
    """
    n = layout.num_problem_vars
    if n > MAX_BRUTE_FORCE_DIM:
        raise ValueError(f"enumeration limited to {MAX_BRUTE_FORCE_DIM} problem variables, got {n}")
    best_value = None
    best_index = 0
    total = 1 << n
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        rows = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int64)
        values = energy_min_aux_many(q, layout, rows)
        chunk_min = int(values.min())
        if best_value is None or chunk_min < best_value:
            best_value = chunk_min
            best_index = start + int(np.argmin(values))
    witness = tuple((best_index >> i) & 1 for i in range(n))
    return best_value, witness


def brute_force_min(q: QuboMatrix) -> tuple[int, tuple[int, ...]]:
    """Exact global minimum over all 2^dim bit vectors; lowest-value witness."""
    if q.dim > MAX_BRUTE_FORCE_DIM:
        raise ValueError(f"brute force limited to dim {MAX_BRUTE_FORCE_DIM}, got {q.dim}")
    best_value = None
    best_index = 0
    total = 1 << q.dim
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        rows = ((idx[:, None] >> np.arange(q.dim)) & 1).astype(np.int64)
        values = energy_many(q, rows)
        chunk_min = int(values.min())
        if best_value is None or chunk_min < best_value:
            best_value = chunk_min
            best_index = start + int(np.argmin(values))
    witness = tuple((best_index >> i) & 1 for i in range(q.dim))
    return best_value, witness


def nnz_offdiag(q: QuboMatrix) -> int:
    """Number of stored strictly off-diagonal coefficients."""
    return sum(1 for (i, j) in q.entries if i < j)


def _offdiag_keys(q: QuboMatrix) -> list[tuple[int, int]]:
    return sorted(key for key in q.entries if key[0] < key[1])


def min_removal_order(q: QuboMatrix) -> list[tuple[int, int]]:
    """Off-diagonal keys ordered smallest signed coefficient first, then by index."""
    return sorted((key for key in q.entries if key[0] < key[1]),
                  key=lambda key: (q.entries[key], key))


def random_removal_order(q: QuboMatrix, seed: int) -> list[tuple[int, int]]:
    """Off-diagonal keys in a seeded uniform order."""
    keys = _offdiag_keys(q)
    rng = generator(seed)
    return [keys[i] for i in rng.permutation(len(keys))]


def _remove(q: QuboMatrix, keys) -> QuboMatrix:
    entries = dict(q.entries)
    for key in keys:
        del entries[key]
    return QuboMatrix(q.dim, entries)


def prune_min(q: QuboMatrix, count: int) -> QuboMatrix:
    """Copy of q without its `count` smallest (signed) off-diagonal coefficients."""
    total = nnz_offdiag(q)
    if not 0 <= count <= total:
        raise ValueError(f"count {count} outside [0, {total}]")
    return _remove(q, min_removal_order(q)[:count])


def prune_random(q: QuboMatrix, count: int, seed: int) -> QuboMatrix:
    """Copy of q without `count` seeded-uniformly chosen off-diagonal coefficients."""
    total = nnz_offdiag(q)
    if not 0 <= count <= total:
        raise ValueError(f"count {count} outside [0, {total}]")
    return _remove(q, random_removal_order(q, seed)[:count])


def pruning_schedule(q: QuboMatrix, strategy: str, seed: int = 0) -> list[PruneStage]:
    """Eleven pruning stages removing 0%, 10%, ..., 100% of off-diagonal entries.

    Cumulative removal targets are round(k * N / 10) with halves rounding up,
    so stage 10 always strips the off-diagonal completely.
    """
    if strategy == "min":
        order = min_removal_order(q)
    elif strategy == "random":
        order = random_removal_order(q, seed)
    else:
        raise ValueError(f"unknown pruning strategy {strategy!r}")
    initial = len(order)
    stages = []
    for k in range(11):
        target = (2 * k * initial + 10) // 20
        stages.append(PruneStage(stage=k, matrix=_remove(q, order[:target]),
                                 removed_cumulative=target))
    return stages


def write_qubo(q: QuboMatrix, layout: VariableLayout | None = None,
               comments: Sequence[str] = ()) -> str:
    """Serialize a matrix (and optional aux layout) to the QUBO text format."""
    lines = [f"c {comment}" for comment in comments]
    if layout is not None:
        if layout.dim != q.dim:
            raise ValueError(f"layout dim {layout.dim} != matrix dim {q.dim}")
        for offset, owner in enumerate(layout.aux_owners):
            lines.append(f"c aux {layout.num_problem_vars + offset} clause {owner}")
    lines.append(f"p qubo {q.dim} {len(q.entries)}")
    for (i, j) in sorted(q.entries):
        lines.append(f"{i} {j} {q.entries[(i, j)]}")
    return "\n".join(lines) + "\n"


def parse_qubo(text: str) -> tuple[QuboMatrix, VariableLayout | None]:
    """Parse QUBO text; returns the layout when aux comments are present."""
    if hasattr(text, "read"):
        text = text.read()
    dim = declared = None
    entries: Entries = {}
    aux: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            fields = line.split()
            if len(fields) == 5 and fields[1] == "aux" and fields[3] == "clause":
                try:
                    aux[int(fields[2])] = int(fields[4])
                except ValueError:
                    raise ValueError(f"line {lineno}: malformed aux comment") from None
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "qubo":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            dim, declared = int(fields[2]), int(fields[3])
            continue
        if dim is None:
            raise ValueError(f"line {lineno}: entry before 'p qubo' header")
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'i j coeff', got {line!r}")
        i, j, value = (int(f) for f in fields)
        if (i, j) in entries:
            raise ValueError(f"line {lineno}: duplicate entry ({i}, {j})")
        entries[(i, j)] = value
    if dim is None:
        raise ValueError("missing 'p qubo' header")
    if len(entries) != declared:
        raise ValueError(f"header declares {declared} entries but {len(entries)} were read")
    matrix = QuboMatrix(dim, entries)
    if not aux:
        return matrix, None
    indices = sorted(aux)
    n = dim - len(indices)
    if indices != list(range(n, dim)):
        raise ValueError(f"aux indices {indices} are not the trailing block of dim {dim}")
    return matrix, VariableLayout(n, tuple(aux[i] for i in indices))
