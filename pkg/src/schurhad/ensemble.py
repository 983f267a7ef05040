"""Sampling of patterned random matrices and their Schur-Hadamard products."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .links import LinkFunction
from .rng import EntryDistribution, derive_seed


@dataclass
class PatternedMatrix:
    """One realization of an n x n matrix with entries x_{L(i,j)}."""

    n: int
    link: LinkFunction
    dist: EntryDistribution
    seed: int
    entries: np.ndarray


@dataclass
class ProductMatrix:
    """Elementwise product of two independently sampled patterned matrices."""

    n: int
    lx: LinkFunction
    ly: LinkFunction
    dists: tuple[EntryDistribution, EntryDistribution]
    seeds: tuple[int, int]
    entries: np.ndarray


def sample_patterned(link: LinkFunction, dist: EntryDistribution, n: int, seed: int) -> PatternedMatrix:
    """Sample with one i.i.d. draw per distinct link value.

    Draws are keyed by (seed, link value), not by sampling order, so equal
    link values share entries and matrices at different n agree on shared cells.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    values = link.value_grid(n)
    entries = dist.sample_for_values(values, seed).reshape(n, n)
    return PatternedMatrix(n, link, dist, seed, entries)


def schur_hadamard(a: PatternedMatrix, b: PatternedMatrix) -> ProductMatrix:
    """Entrywise product; metadata carried through."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    return ProductMatrix(a.n, a.link, b.link, (a.dist, b.dist), (a.seed, b.seed),
                         a.entries * b.entries)


def sample_product(lx: LinkFunction, ly: LinkFunction, dist_x: EntryDistribution,
                   dist_y: EntryDistribution, n: int, seed: int) -> ProductMatrix:
    """Sample X and Y with independent sub-seeds derived from one base seed."""
    x = sample_patterned(lx, dist_x, n, derive_seed(seed, "x"))
    y = sample_patterned(ly, dist_y, n, derive_seed(seed, "y"))
    return schur_hadamard(x, y)


_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def hermitize(m: "ProductMatrix | np.ndarray") -> np.ndarray:
    """(M + M^T) / sqrt(2); exactly symmetric since both mirror cells sum the same pair."""
    a = m.entries if isinstance(m, ProductMatrix) else np.asarray(m, dtype=np.float64)
    return (a + a.T) * _INV_SQRT2


def entry_covariance_probe(
    lx: LinkFunction,
    ly: LinkFunction,
    dist_x: EntryDistribution,
    dist_y: EntryDistribution,
    n: int,
    pairs: Sequence[tuple[tuple[int, int], tuple[int, int]]],
    trials: int,
    seed: int,
) -> list[float]:
    """Sample covariance of M at each cell pair over independent trials.

    For jointly injective link pairs distinct cells are uncorrelated, so these
    should be near 0 within a few / sqrt(trials).
    """
    if trials < 100:
        raise ValueError("trials must be >= 100")
    for (i, j), (i2, j2) in pairs:
        for v in (i, j, i2, j2):
            if not 1 <= v <= n:
                raise ValueError(f"cell index {v} outside [1, {n}]")
    first = np.empty((trials, len(pairs)))
    second = np.empty((trials, len(pairs)))
    for t in range(trials):
        m = sample_product(lx, ly, dist_x, dist_y, n, derive_seed(seed, "trial", t))
        for p, ((i, j), (i2, j2)) in enumerate(pairs):
            first[t, p] = m.entries[i - 1, j - 1]
            second[t, p] = m.entries[i2 - 1, j2 - 1]
    out = []
    for p in range(len(pairs)):
        a, b = first[:, p], second[:, p]
        out.append(float(np.sum((a - a.mean()) * (b - b.mean())) / (trials - 1)))
    return out


def dump_matrix_csv(entries: np.ndarray, path: Optional[str] = None) -> str:
    """Row-major CSV with 17 significant digits (debug dumps)."""
    lines = [",".join(f"{v:.17g}" for v in row) for row in entries]
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
