"""Theoretical *-moments of circular/semicircular variables and empirical trace moments.

The empirical estimator averages (1/n^{1+k/2}) tr(M^{e1} ... M^{ek}) over
independent matrix samples; traces are computed by explicit products of M and
M^T in word order (split at the middle so sub-products are shared between
words), never via eigendecompositions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ensemble import hermitize, sample_product
from .errors import BudgetExceeded
from .links import LinkFunction
from .partitions import catalan, enumerate_nc2
from .rng import DEFAULT_SEED, EntryDistribution, derive_seed
from .words import Word, as_word

MAX_WORD_LEN = 16
MAX_SYMMETRIC_K = 8
MAX_TRACE_FLOPS = 4e13


@dataclass(frozen=True)
class StarMomentEstimate:
    word: Word
    n: int
    trials: int
    mean: float
    std_error: float


def circular_star_moment(w: "Word | str") -> int:
    """Number of non-crossing pairings of the word positions whose blocks all
    pair a '1' with a '*'; this is the *-moment of a circular variable."""
    w = as_word(w)
    k = len(w)
    if k > MAX_WORD_LEN:
        raise BudgetExceeded(f"word length capped at {MAX_WORD_LEN}")
    if k % 2 == 1:
        return 0
    total = 0
    for p in enumerate_nc2(k):
        if all(w[r - 1] != w[s - 1] for r, s in p.blocks):
            total += 1
    return total


def semicircle_moment(k: int) -> int:
    """C_{k/2} for even k, 0 for odd k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > 32:
        raise BudgetExceeded("semicircle moment capped at k=32")
    return catalan(k // 2) if k % 2 == 0 else 0


def _product_for(symbols: tuple[str, ...], memo: dict, base: Mapping[str, np.ndarray]) -> np.ndarray:
    if symbols in memo:
        return memo[symbols]
    if len(symbols) == 1:
        out = base[symbols[0]]
    else:
        mid = len(symbols) // 2
        out = _product_for(symbols[:mid], memo, base) @ _product_for(symbols[mid:], memo, base)
    memo[symbols] = out
    return out


def _trace_of_word(w: Word, memo: dict, base: Mapping[str, np.ndarray]) -> float:
    if len(w) == 1:
        return float(np.trace(base[w.symbols[0]]))
    mid = len(w) // 2
    left = _product_for(w.symbols[:mid], memo, base)
    right = _product_for(w.symbols[mid:], memo, base)
    return float(np.einsum("ij,ji->", left, right))


def _check_trace_budget(n: int, words: Sequence[Word], trials: int) -> None:
    # crude cost model: one matmul per shared sub-product of length <= ceil(max/2)
    half = max((len(w) + 1) // 2 for w in words)
    matmuls = max(0, 2 ** (half + 1) - 4)
    flops = 2.0 * n ** 3 * matmuls * trials
    if flops > MAX_TRACE_FLOPS:
        raise BudgetExceeded(
            f"trace estimation too large (~{flops:.2g} flops > {MAX_TRACE_FLOPS:.2g}); reduce n, trials, or word length")


def empirical_star_moments(
    lx: LinkFunction,
    ly: LinkFunction,
    dist_x: EntryDistribution,
    dist_y: EntryDistribution,
    n: int,
    words: Iterable["Word | str"],
    trials: int = 20,
    seed: int = DEFAULT_SEED,
) -> dict[str, StarMomentEstimate]:
    """Estimate several *-moments from the same matrix samples.

    Per-trial seeds derive deterministically from the base seed, and the
    trial reduction is a fixed-order mean, so results are reproducible.
    """
    words = [as_word(w) for w in words]
    if not words:
        raise ValueError("need at least one word")
    if trials < 2:
        raise ValueError("trials must be >= 2")
    if max(len(w) for w in words) > MAX_WORD_LEN:
        raise BudgetExceeded(f"word length capped at {MAX_WORD_LEN}")
    _check_trace_budget(n, words, trials)

    traces = {str(w): np.empty(trials) for w in words}
    for t in range(trials):
        m = sample_product(lx, ly, dist_x, dist_y, n, derive_seed(seed, "trial", t))
        base = {"1": m.entries, "*": m.entries.T}
        memo: dict = {}
        for w in words:
            traces[str(w)][t] = _trace_of_word(w, memo, base) / n ** (1 + len(w) / 2)
    out = {}
    for w in words:
        vals = traces[str(w)]
        out[str(w)] = StarMomentEstimate(
            word=w, n=n, trials=trials,
            mean=float(vals.mean()),
            std_error=float(vals.std(ddof=1) / math.sqrt(trials)),
        )
    return out


def empirical_star_moment(
    lx: LinkFunction,
    ly: LinkFunction,
    dist_x: EntryDistribution,
    dist_y: EntryDistribution,
    n: int,
    word: "Word | str",
    trials: int = 20,
    seed: int = DEFAULT_SEED,
) -> StarMomentEstimate:
    w = as_word(word)
    return empirical_star_moments(lx, ly, dist_x, dist_y, n, [w], trials, seed)[str(w)]


def symmetric_moment(
    lx: LinkFunction,
    ly: LinkFunction,
    dist_x: EntryDistribution,
    dist_y: EntryDistribution,
    n: int,
    k: int,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
) -> StarMomentEstimate:
    """k-th moment estimate of the hermitized product (M + M^T)/sqrt(2), scaled by n^{-1/2}."""
    if k % 2 != 0 or k < 2:
        raise ValueError("k must be a positive even integer")
    if k > MAX_SYMMETRIC_K:
        raise BudgetExceeded(f"symmetric moment capped at k={MAX_SYMMETRIC_K}")
    if trials < 2:
        raise ValueError("trials must be >= 2")
    if 2.0 * n ** 3 * (k // 2) * trials > MAX_TRACE_FLOPS:
        raise BudgetExceeded("symmetric moment estimation too large; reduce n or trials")
    vals = np.empty(trials)
    for t in range(trials):
        h = hermitize(sample_product(lx, ly, dist_x, dist_y, n, derive_seed(seed, "trial", t)))
        p = h
        for _ in range(k // 2 - 1):
            p = p @ h
        # tr(H^k) = sum_{ab} (H^{k/2})_{ab} (H^{k/2})_{ba}
        vals[t] = float(np.einsum("ij,ji->", p, p)) / n ** (1 + k / 2)
    word = Word(("1",) * k)
    return StarMomentEstimate(word=word, n=n, trials=trials,
                              mean=float(vals.mean()),
                              std_error=float(vals.std(ddof=1) / math.sqrt(trials)))
