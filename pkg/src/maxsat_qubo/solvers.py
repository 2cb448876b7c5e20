"""Classical QUBO samplers: exact brute force, tabu search, simulated annealing, random guessing.

All samplers are seed-deterministic. Multi-sample calls advance every sample
in vectorized lockstep; each sample's trajectory depends only on its own
derived seed, so results are identical to running the samples one at a time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .formula import CnfFormula, count_satisfied_many
from .qubo import MAX_BRUTE_FORCE_DIM, QuboMatrix, brute_force_min, energy_many
from .rng import generator, mix

SOLVER_KINDS = ("brute", "tabu", "sa", "random")

_BIG = np.int64(1) << 62


@dataclass(frozen=True)
class SolverConfig:
    kind: str
    samples: int = 1
    seed: int = 0
    iteration_limit: int | None = None
    time_limit_ms: int | None = None
    tabu_tenure: int | None = None
    sa_beta_start: float = 0.1
    sa_beta_end: float = 10.0
    sa_sweeps: int = 1000

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise ValueError(f"unknown solver kind {self.kind!r}, expected one of {SOLVER_KINDS}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.iteration_limit is not None and self.iteration_limit < 0:
            raise ValueError("iteration_limit must be non-negative")
        if self.time_limit_ms is not None and self.time_limit_ms < 1:
            raise ValueError("time_limit_ms must be positive")
        if self.tabu_tenure is not None and self.tabu_tenure < 1:
            raise ValueError("tabu_tenure must be positive")
        if self.sa_sweeps < 0:
            raise ValueError("sa_sweeps must be non-negative")
        if not 0 < self.sa_beta_start < self.sa_beta_end:
            raise ValueError("need 0 < sa_beta_start < sa_beta_end")


@dataclass(frozen=True)
class SolveResult:
    bits: tuple[int, ...]
    energy: int
    run_index: int
    elapsed_ms: int
    seed_used: int


def default_tenure(dim: int) -> int:
    return max(10, dim // 10)


def default_iteration_limit(dim: int) -> int:
    return 10_000 * dim


def energy_gains(q: QuboMatrix, bits: Sequence[int]) -> np.ndarray:
    """Exact energy change from flipping each single bit of the vector."""
    if len(bits) != q.dim:
        raise ValueError(f"bit vector length {len(bits)} != dim {q.dim}")
    x = np.asarray([int(b) for b in bits], dtype=np.int64)
    diag, coupling = q.diag_coupling()
    return (1 - 2 * x) * (diag + coupling @ x)


def _initial_states(q: QuboMatrix, seeds: Sequence[int]):
    diag, coupling = q.diag_coupling()
    gens = [generator(s) for s in seeds]
    X = np.stack([g.integers(0, 2, size=q.dim, dtype=np.int64) for g in gens])
    G = diag[None, :] + X @ coupling
    E = X @ diag + ((X @ coupling) * X).sum(axis=1) // 2
    return gens, X, G, E, coupling


def _batch_tabu(q: QuboMatrix, seeds: Sequence[int], iteration_limit: int | None,
                tenure: int, time_limit_ms: int | None):
    """Lockstep best-improvement tabu search over one row per seed.

    Each iteration flips a row's best non-tabu bit by cached energy delta;
    a tabu bit may still flip if it strictly improves the row's incumbent
    best (aspiration). Rows where every bit is tabu and nothing aspirates
    ignore the tabu list for that iteration.
    """
    start = time.perf_counter()
    k = len(seeds)
    _, X, G, E, coupling = _initial_states(q, seeds)
    best_energy = E.copy()
    best_bits = X.copy()
    tabu_until = np.zeros((k, q.dim), dtype=np.int64)
    rows = np.arange(k)
    iteration = 0
    while iteration_limit is None or iteration < iteration_limit:
        if time_limit_ms is not None and (time.perf_counter() - start) * 1000 >= time_limit_ms:
            break
        delta = np.where(X == 1, -G, G)
        allowed = (tabu_until <= iteration) | (E[:, None] + delta < best_energy[:, None])
        stuck = ~allowed.any(axis=1)
        if stuck.any():
            allowed[stuck] = True
        flip = np.where(allowed, delta, _BIG).argmin(axis=1)
        chosen_delta = delta[rows, flip]
        sign = 1 - 2 * X[rows, flip]
        X[rows, flip] = 1 - X[rows, flip]
        G += sign[:, None] * coupling[flip, :]
        E += chosen_delta
        tabu_until[rows, flip] = iteration + 1 + tenure
        improved = E < best_energy
        if improved.any():
            best_energy[improved] = E[improved]
            best_bits[improved] = X[improved]
        iteration += 1
    elapsed_ms = int(round((time.perf_counter() - start) * 1000))
    return best_energy, best_bits, elapsed_ms


def _neighbor_lists(q: QuboMatrix):
    idx: list[list[int]] = [[] for _ in range(q.dim)]
    weight: list[list[int]] = [[] for _ in range(q.dim)]
    for (i, j), value in q.entries.items():
        if i != j:
            idx[i].append(j)
            weight[i].append(value)
            idx[j].append(i)
            weight[j].append(value)
    return ([np.asarray(a, dtype=np.int64) for a in idx],
            [np.asarray(w, dtype=np.int64) for w in weight])


def _batch_sa(q: QuboMatrix, seeds: Sequence[int], sweeps: int,
              beta_start: float, beta_end: float, time_limit_ms: int | None):
    """Lockstep single-flip Metropolis annealing on a geometric beta schedule."""
    start = time.perf_counter()
    gens, X, G, E, _ = _initial_states(q, seeds)
    best_energy = E.copy()
    best_bits = X.copy()
    if sweeps > 0:
        nbr_idx, nbr_weight = _neighbor_lists(q)
        exponents = np.arange(sweeps) / max(1, sweeps - 1)
        betas = beta_start * (beta_end / beta_start) ** exponents
        for sweep in range(sweeps):
            if time_limit_ms is not None and (time.perf_counter() - start) * 1000 >= time_limit_ms:
                break
            uniforms = np.stack([g.random(q.dim) for g in gens])
            beta = betas[sweep]
            for i in range(q.dim):
                delta = np.where(X[:, i] == 1, -G[:, i], G[:, i])
                accept = delta <= 0
                uphill = ~accept
                if uphill.any():
                    accept[uphill] = uniforms[uphill, i] < np.exp(-beta * delta[uphill])
                if not accept.any():
                    continue
                acc = np.nonzero(accept)[0]
                sign = 1 - 2 * X[acc, i]
                X[acc, i] = 1 - X[acc, i]
                idx = nbr_idx[i]
                if idx.size:
                    G[np.ix_(acc, idx)] += sign[:, None] * nbr_weight[i][None, :]
                E[acc] += delta[acc]
                improved = E < best_energy
                if improved.any():
                    best_energy[improved] = E[improved]
                    best_bits[improved] = X[improved]
    elapsed_ms = int(round((time.perf_counter() - start) * 1000))
    return best_energy, best_bits, elapsed_ms


def _results_from_batch(q: QuboMatrix, seeds, best_bits, elapsed_ms) -> list[SolveResult]:
    energies = energy_many(q, best_bits)
    return [
        SolveResult(bits=tuple(int(b) for b in best_bits[r]), energy=int(energies[r]),
                    run_index=r, elapsed_ms=elapsed_ms, seed_used=seeds[r])
        for r in range(len(seeds))
    ]


def tabu_search(q: QuboMatrix, iteration_limit: int, tenure: int, seed: int,
                time_limit_ms: int | None = None) -> SolveResult:
    """Single tabu run from a seeded random start; returns the best vector seen."""
    _, best_bits, elapsed = _batch_tabu(q, [seed], iteration_limit, tenure, time_limit_ms)
    return _results_from_batch(q, [seed], best_bits, elapsed)[0]


def simulated_annealing(q: QuboMatrix, sweeps: int, beta_start: float, beta_end: float,
                        seed: int) -> SolveResult:
    """Single annealing run; returns the best vector seen."""
    if not 0 < beta_start < beta_end:
        raise ValueError("need 0 < beta_start < beta_end")
    _, best_bits, elapsed = _batch_sa(q, [seed], sweeps, beta_start, beta_end, None)
    return _results_from_batch(q, [seed], best_bits, elapsed)[0]


def solve(q: QuboMatrix, config: SolverConfig) -> list[SolveResult]:
    """Run the configured sampler; run r uses the derived seed mix(config.seed, r)."""
    seeds = [mix(config.seed, r) for r in range(config.samples)]

    if config.kind == "brute":
        if q.dim > MAX_BRUTE_FORCE_DIM:
            raise ValueError(f"brute solver limited to dim {MAX_BRUTE_FORCE_DIM}, got {q.dim}")
        start = time.perf_counter()
        best_value, witness = brute_force_min(q)
        elapsed = int(round((time.perf_counter() - start) * 1000))
        return [SolveResult(bits=witness, energy=best_value, run_index=r,
                            elapsed_ms=elapsed, seed_used=seeds[r])
                for r in range(config.samples)]

    if config.kind == "random":
        start = time.perf_counter()
        X = np.stack([generator(s).integers(0, 2, size=q.dim, dtype=np.int64) for s in seeds])
        elapsed = int(round((time.perf_counter() - start) * 1000))
        return _results_from_batch(q, seeds, X, elapsed)

    if config.kind == "tabu":
        iteration_limit = config.iteration_limit
        if iteration_limit is None and config.time_limit_ms is None:
            iteration_limit = default_iteration_limit(q.dim)
        tenure = config.tabu_tenure or default_tenure(q.dim)
        _, best_bits, elapsed = _batch_tabu(q, seeds, iteration_limit, tenure,
                                            config.time_limit_ms)
        return _results_from_batch(q, seeds, best_bits, elapsed)

    _, best_bits, elapsed = _batch_sa(q, seeds, config.sa_sweeps, config.sa_beta_start,
                                      config.sa_beta_end, config.time_limit_ms)
    return _results_from_batch(q, seeds, best_bits, elapsed)


def random_baseline(formula: CnfFormula, k: int, seed: int) -> list[tuple[tuple[int, ...], int]]:
    """k seeded uniform assignments with their satisfied-clause counts."""
    if k < 1:
        raise ValueError("k must be >= 1")
    X = generator(seed).integers(0, 2, size=(k, formula.num_vars), dtype=np.int64)
    counts = count_satisfied_many(formula, X)
    return [(tuple(int(b) for b in X[r]), int(counts[r])) for r in range(k)]
