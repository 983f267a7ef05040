"""Exact counting of constrained index tuples underlying the trace expansion.

For a word e_1 ... e_k, a tuple (i_1, ..., i_k) in [n]^k induces, for each
link, a partition of the edge positions [k]: u ~ v iff the link values of
edges (i_u, i_{u+1}) and (i_v, i_{v+1}) coincide (cyclically, i_{k+1} = i_1).
Two counting semantics are exposed:

* `count_constrained` - the induced partition must EQUAL the prescribed one,
  i.e. same-block edges share a value AND different blocks differ. These
  classes partition [n]^k, so summing over all partition pairs gives n^k.
* `count_satisfying` - only the same-block equalities are enforced (the
  class closed under merging extra coincidences). This is what free-variable
  arguments count: for jointly injective link pairs, non-crossing alternating
  rows are exactly n^{k/2+1} at every finite n.

The search assigns positions in order i_1, i_2, ...; as soon as both endpoints
of an edge are fixed its value is checked against the partition constraints
and inconsistent branches are pruned. When an edge's block already carries a
value, the next position is solved from a precomputed (value, fixed-index) ->
free-index table instead of scanned over [1, n]. The search runs on vectorized
frontier batches, sliced to a bounded row count, so it behaves like
n^{|pi|+1} with small constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded
from .links import LinkFunction, delta
from .moments import StarMomentEstimate, empirical_star_moment
from .partitions import Partition, enumerate_pair_partitions, is_noncrossing, iter_partitions
from .rng import DEFAULT_SEED, EntryDistribution
from .words import Word, as_word

MAX_COUNT_K = 8
MAX_COUNT_N = 128
MAX_RECON_LEN = 6
MAX_RECON_N = 64
MAX_COMPAT_LEN = 6
MAX_JOINT_LEN = 8
MAX_COUNT_WORK = 2.5e8
_SLICE_ROWS = 1 << 20
DECAY_SLOPE = -0.8


@dataclass(frozen=True)
class ConstraintSystem:
    """One counting instance: word, target partitions, links, and dimension."""

    word: Word
    pi_x: Partition
    pi_y: Optional[Partition]
    lx: LinkFunction
    ly: Optional[LinkFunction]
    n: int

    def __post_init__(self):
        k = len(self.word)
        if self.pi_x.ground_size != k:
            raise ValueError("pi_x must partition the word positions")
        if self.pi_y is not None and self.pi_y.ground_size != k:
            raise ValueError("pi_y must partition the word positions")
        if (self.pi_y is None) != (self.ly is None):
            raise ValueError("pi_y and ly must be supplied together")


def _csr_solver(link: LinkFunction, n: int, by_row: bool):
    """Sorted (code * n + fixed_index) keys with companion free indices, plus max bucket size."""
    cache_key = ("csr", n, "row" if by_row else "col")
    if cache_key in link._grid_cache:
        return link._grid_cache[cache_key]
    codes = link.code_grid(n)
    if int(codes.max()) >= (2 ** 62) // max(n, 1):
        raise BudgetExceeded("link codes too large for solver keys")
    ii, jj = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1), indexing="ij")
    fixed = (ii if by_row else jj).ravel() - 1
    free = (jj if by_row else ii).ravel()
    keys = codes.ravel() * n + fixed
    order = np.argsort(keys, kind="stable")
    keys_sorted = keys[order]
    free_sorted = free[order].astype(np.int32)
    _, counts = np.unique(keys_sorted, return_counts=True)
    out = (keys_sorted, free_sorted, int(counts.max()))
    link._grid_cache[cache_key] = out
    return out


class _Frontier:
    """A batch of partial assignments with the per-block edge values seen so far."""

    __slots__ = ("cols", "xvals", "yvals")

    def __init__(self, cols, xvals, yvals):
        self.cols: list[np.ndarray] = cols
        self.xvals: dict[int, np.ndarray] = xvals
        self.yvals: dict[int, np.ndarray] = yvals

    @property
    def rows(self) -> int:
        return len(self.cols[0]) if self.cols else 1

    def take(self, idx) -> "_Frontier":
        return _Frontier([c[idx] for c in self.cols],
                         {b: v[idx] for b, v in self.xvals.items()},
                         {b: v[idx] for b, v in self.yvals.items()})

    def with_col(self, col: np.ndarray) -> "_Frontier":
        return _Frontier(self.cols + [col], dict(self.xvals), dict(self.yvals))

    def vals(self, side: str) -> dict[int, np.ndarray]:
        return self.xvals if side == "x" else self.yvals


class _Engine:
    def __init__(self, cs: ConstraintSystem, distinct: bool, max_work: float):
        self.word = cs.word
        self.k = len(cs.word)
        self.n = cs.n
        self.distinct = distinct
        self.lx, self.ly = cs.lx, cs.ly
        self.grids = {"x": cs.lx.code_grid(cs.n)}
        self.blocks = {"x": cs.pi_x.block_index()}
        self.min_edge = {"x": {i: b[0] for i, b in enumerate(cs.pi_x.blocks)}}
        self.sides = ("x",)
        if cs.ly is not None:
            self.grids["y"] = cs.ly.code_grid(cs.n)
            self.blocks["y"] = cs.pi_y.block_index()
            self.min_edge["y"] = {i: b[0] for i, b in enumerate(cs.pi_y.blocks)}
            self.sides = ("x", "y")
        self._check_work(max_work)

    # -- structure -----------------------------------------------------------

    def _candidate_edges(self, p: int) -> list[int]:
        """Edges whose values become computable at depth p, in processing order."""
        edges = []
        if p >= 2:
            edges.append(p - 1)
        if p == self.k:
            edges.append(self.k)
        return edges

    def _source_usable_structurally(self, side: str, edge: int, p: int) -> bool:
        """Whether this edge's block value is recorded strictly before depth p."""
        block = self.blocks[side][edge]
        return self.min_edge[side][block] <= p - 2

    def _check_work(self, max_work: float) -> None:
        free = 1  # position 1
        for p in range(2, self.k + 1):
            if not any(self._source_usable_structurally(s, e, p)
                       for e in self._candidate_edges(p) for s in self.sides):
                free += 1
        dmax = 1
        for side in self.sides:
            link = self.lx if side == "x" else self.ly
            for by_row in (True, False):
                dmax = max(dmax, _csr_solver(link, self.n, by_row)[2])
        est = float(self.n) ** free * float(dmax) ** (self.k - free)
        if est > max_work:
            raise BudgetExceeded(
                f"estimated search size {est:.2g} exceeds budget {max_work:.2g} "
                f"(free positions {free}, n {self.n})")

    # -- edge values ----------------------------------------------------------

    def _edge_code(self, fr: _Frontier, side: str, edge: int) -> np.ndarray:
        grid = self.grids[side]
        a = fr.cols[edge - 1]
        b = fr.cols[edge % self.k]
        if self.word[edge - 1] == "1":
            return grid[a - 1, b - 1]
        return grid[b - 1, a - 1]

    def _solver_for(self, side: str, edge: int, p: int):
        """(link, by_row, known_position_index) for solving position p from this edge."""
        link = self.lx if side == "x" else self.ly
        eps = self.word[edge - 1]
        if edge == p - 1:
            # unknown endpoint is i_p = i_{edge+1}: for eps=1 the value sits at
            # (row i_edge, col i_p), so solve columns from the row; swapped for *
            return link, eps == "1", edge - 1
        # wrap edge k at p == k: unknown is i_k, known is i_1
        return link, eps == "*", 0

    def _expand_solved(self, fr: _Frontier, side: str, edge: int, p: int) -> _Frontier:
        link, by_row, known_idx = self._solver_for(side, edge, p)
        keys_sorted, free_sorted, _ = _csr_solver(link, self.n, by_row)
        target = fr.vals(side)[self.blocks[side][edge]]
        known = fr.cols[known_idx].astype(np.int64)
        qkeys = target * self.n + (known - 1)
        lo = np.searchsorted(keys_sorted, qkeys, side="left")
        hi = np.searchsorted(keys_sorted, qkeys, side="right")
        counts = hi - lo
        total = int(counts.sum())
        if total == 0:
            return _Frontier([np.empty(0, dtype=np.int32)] * (len(fr.cols) + 1), {}, {})
        rows = np.repeat(np.arange(len(counts)), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        offsets = np.arange(total) - starts + np.repeat(lo, counts)
        return fr.take(rows).with_col(free_sorted[offsets])

    def _process_edges(self, fr: _Frontier, p: int, skip) -> Optional[_Frontier]:
        """Check and record every edge computable at depth p; None when all rows die."""
        for edge in self._candidate_edges(p):
            for side in self.sides:
                block = self.blocks[side][edge]
                vals = fr.vals(side)
                code = self._edge_code(fr, side, edge)
                if block in vals:
                    if (side, edge) == skip:
                        continue
                    keep = code == vals[block]
                    if not keep.all():
                        fr = fr.take(keep)
                        if fr.rows == 0:
                            return None
                else:
                    if self.distinct and vals:
                        keep = np.ones(len(code), dtype=bool)
                        for other in vals.values():
                            keep &= code != other
                        if not keep.all():
                            fr = fr.take(keep)
                            code = code[keep]
                            if fr.rows == 0:
                                return None
                    fr.vals(side)[block] = code
        return fr

    # -- search ----------------------------------------------------------------

    def count(self) -> int:
        return self._descend(1, _Frontier([], {}, {}))

    def _descend(self, p: int, fr: _Frontier) -> int:
        if p > self.k:
            return fr.rows
        source = None
        bucket = 1
        for edge in self._candidate_edges(p):
            for side in self.sides:
                if self.blocks[side][edge] in fr.vals(side):
                    link, by_row, _ = self._solver_for(side, edge, p)
                    b = _csr_solver(link, self.n, by_row)[2]
                    if source is None or b < bucket:
                        source, bucket = (side, edge), b
        total = 0
        if source is not None:
            batch = max(1, _SLICE_ROWS // max(bucket, 1))
            for lo in range(0, fr.rows, batch):
                sub = fr.take(slice(lo, min(lo + batch, fr.rows)))
                ext = self._expand_solved(sub, source[0], source[1], p)
                if ext.rows == 0:
                    continue
                nxt = self._process_edges(ext, p, skip=source)
                if nxt is not None:
                    total += self._descend(p + 1, nxt)
        else:
            step = max(1, _SLICE_ROWS // max(fr.rows, 1))
            for start in range(1, self.n + 1, step):
                vals = np.arange(start, min(start + step, self.n + 1), dtype=np.int32)
                if fr.cols:
                    idx = np.repeat(np.arange(fr.rows), len(vals))
                    ext = fr.take(idx).with_col(np.tile(vals, fr.rows))
                else:
                    ext = fr.with_col(vals)
                nxt = self._process_edges(ext, p, skip=None)
                if nxt is not None:
                    total += self._descend(p + 1, nxt)
        return total


def _validate_counting(word: Word, n: int) -> None:
    if len(word) > MAX_COUNT_K:
        raise BudgetExceeded(f"counting capped at word length {MAX_COUNT_K}")
    if n > MAX_COUNT_N:
        raise BudgetExceeded(f"counting capped at n={MAX_COUNT_N}")
    if n < 1:
        raise ValueError("n must be >= 1")


def count_constrained(cs: ConstraintSystem, max_work: float = MAX_COUNT_WORK) -> int:
    """Exact number of tuples whose induced partitions equal (pi_x, pi_y)."""
    _validate_counting(cs.word, cs.n)
    return _Engine(cs, distinct=True, max_work=max_work).count()


def count_satisfying(cs: ConstraintSystem, max_work: float = MAX_COUNT_WORK) -> int:
    """Exact number of tuples satisfying the same-block equality constraints only."""
    _validate_counting(cs.word, cs.n)
    return _Engine(cs, distinct=False, max_work=max_work).count()


def count_single(link: LinkFunction, pi: Partition, word: "Word | str", n: int,
                 max_work: float = MAX_COUNT_WORK) -> int:
    """Exact size of one single-link class (induced partition equals pi)."""
    word = as_word(word)
    cs = ConstraintSystem(word, pi, None, link, None, n)
    _validate_counting(word, n)
    return _Engine(cs, distinct=True, max_work=max_work).count()


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class CountRow:
    pi_x: Partition
    pi_y: Partition
    n: int
    count: int
    denom: int
    ratio: Fraction
    predicted_limit: Optional[Fraction]


@dataclass(frozen=True)
class PairSummary:
    pi_x: Partition
    pi_y: Partition
    predicted_limit: Optional[Fraction]
    slope: Optional[float]
    decays: bool
    exact_match: bool


@dataclass
class CountReport:
    kind: str
    lx_name: str
    ly_name: str
    word: Word
    n_grid: tuple[int, ...]
    rows: list[CountRow] = field(default_factory=list)
    summaries: list[PairSummary] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def summary_for(self, pi_x: Partition, pi_y: Partition) -> PairSummary:
        for s in self.summaries:
            if s.pi_x == pi_x and s.pi_y == pi_y:
                return s
        raise KeyError(f"no summary for ({pi_x}, {pi_y})")


def _fit_decay(ns: Sequence[int], ratios: Sequence[Fraction]) -> tuple[Optional[float], bool]:
    """Least-squares slope of log ratio vs log n; zero ratios only allowed at the tail."""
    pos = [(n, r) for n, r in zip(ns, ratios) if r > 0]
    zeros = [n for n, r in zip(ns, ratios) if r == 0]
    if not pos:
        return None, True
    if zeros and min(zeros) < max(n for n, _ in pos):
        return None, False
    if len(pos) == 1:
        return None, bool(zeros)
    xs = np.log([float(n) for n, _ in pos])
    ys = np.log([float(r) for _, r in pos])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, slope <= DECAY_SLOPE


def _alternation_product(pi: Partition, word: Word) -> int:
    return int(all(word[r - 1] != word[s - 1] for r, s in pi.blocks))


def _assumption2_flags(lx: LinkFunction, ly: LinkFunction, n_grid: Sequence[int]) -> list[str]:
    flags = []
    for link in (lx, ly):
        deltas = [delta(link, n) for n in n_grid]
        if any(b > a for a, b in zip(deltas, deltas[1:])):
            flags.append(f"assumption2-violation:{link.name}")
    return flags


def _validate_grid(n_grid: Sequence[int]) -> tuple[int, ...]:
    grid = tuple(n_grid)
    if len(grid) < 2:
        raise ValueError("n_grid must have at least 2 sizes")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    return grid


def joint_circularity_report(lx: LinkFunction, ly: LinkFunction, word: "Word | str",
                             n_grid: Sequence[int],
                             max_work: float = MAX_COUNT_WORK) -> CountReport:
    """Counts of the matched classes (pi, pi) over all pair partitions.

    The ratio count / n^{1 + k/2} should approach the alternation product for
    non-crossing pairings and 0 for crossing ones. Counts enforce the
    same-block equalities (the free-variable count), so for jointly injective
    link pairs the non-crossing alternating rows hit their limit exactly.
    """
    word = as_word(word)
    k = len(word)
    if k % 2 != 0:
        raise ValueError("joint circularity needs an even word length")
    if k > MAX_JOINT_LEN:
        raise BudgetExceeded(f"joint circularity capped at word length {MAX_JOINT_LEN}")
    grid = _validate_grid(n_grid)
    report = CountReport("joint-circularity", lx.name, ly.name, word, grid)
    report.flags.extend(_assumption2_flags(lx, ly, grid))
    for pi in enumerate_pair_partitions(k):
        predicted = Fraction(_alternation_product(pi, word)) if is_noncrossing(pi) else Fraction(0)
        ratios = []
        for n in grid:
            cs = ConstraintSystem(word, pi, pi, lx, ly, n)
            c = count_satisfying(cs, max_work=max_work)
            denom = n ** (1 + k // 2)
            row = CountRow(pi, pi, n, c, denom, Fraction(c, denom), predicted)
            report.rows.append(row)
            ratios.append(row.ratio)
        slope, decays = _fit_decay(grid, ratios)
        exact = all(r == predicted for r in ratios)
        report.summaries.append(PairSummary(pi, pi, predicted, slope, decays, exact))
        if predicted == 0 and not decays and not exact:
            report.flags.append(f"non-decaying:{pi}|{pi}")
    return report


def compatibility_report(lx: LinkFunction, ly: LinkFunction, word: "Word | str",
                         n_grid: Sequence[int],
                         max_work: float = MAX_COUNT_WORK) -> CountReport:
    """Counts of all mismatched ordered pairs (pi, pi'), which should all decay."""
    word = as_word(word)
    k = len(word)
    if k % 2 != 0:
        raise ValueError("compatibility needs an even word length")
    if k > MAX_COMPAT_LEN:
        raise BudgetExceeded(f"compatibility capped at word length {MAX_COMPAT_LEN}")
    grid = _validate_grid(n_grid)
    report = CountReport("compatibility", lx.name, ly.name, word, grid)
    report.flags.extend(_assumption2_flags(lx, ly, grid))
    pairs = enumerate_pair_partitions(k)
    for pi in pairs:
        for pj in pairs:
            if pi == pj:
                continue
            ratios = []
            for n in grid:
                cs = ConstraintSystem(word, pi, pj, lx, ly, n)
                c = count_satisfying(cs, max_work=max_work)
                denom = n ** (1 + k // 2)
                row = CountRow(pi, pj, n, c, denom, Fraction(c, denom), Fraction(0))
                report.rows.append(row)
                ratios.append(row.ratio)
            slope, decays = _fit_decay(grid, ratios)
            report.summaries.append(PairSummary(pi, pj, Fraction(0), slope, decays,
                                                all(r == 0 for r in ratios)))
            if not decays:
                report.flags.append(f"non-decaying:{pi}|{pj}")
    return report


# ---------------------------------------------------------------------------
# finite-n reconstruction of the expected *-moment from exact counts

@dataclass
class ReconstructionCheck:
    word: Word
    n: int
    combinatorial_sum: Fraction
    monte_carlo: StarMomentEstimate
    abs_diff: float
    tolerance: float
    agrees: bool


def _partition_weight(pi: Partition, dist: EntryDistribution) -> Fraction:
    w = Fraction(1)
    for b in pi.blocks:
        w *= dist.moment(len(b))
        if w == 0:
            return Fraction(0)
    return w


def moment_reconstruction_check(
    lx: LinkFunction,
    ly: LinkFunction,
    dist_x: EntryDistribution,
    dist_y: EntryDistribution,
    word: "Word | str",
    n: int,
    trials: int = 2000,
    seed: int = DEFAULT_SEED,
    max_work: float = MAX_COUNT_WORK,
) -> ReconstructionCheck:
    """Exact finite-n expected *-moment versus a Monte-Carlo estimate of it.

    The exact value sums, over all pairs of induced partitions, the class
    count times the product over blocks of the entry distributions' raw
    moments, normalized by n^{1 + k/2}. Pairs with vanishing moment weight
    (any singleton block, or odd blocks for the symmetric built-ins) are
    skipped.
    """
    word = as_word(word)
    k = len(word)
    if k % 2 != 0 or k > MAX_RECON_LEN:
        raise ValueError(f"reconstruction needs an even word length <= {MAX_RECON_LEN}")
    if n > MAX_RECON_N:
        raise BudgetExceeded(f"reconstruction capped at n={MAX_RECON_N}")
    weights_x = {}
    weights_y = {}
    for pi in iter_partitions(k):
        wx = _partition_weight(pi, dist_x)
        wy = _partition_weight(pi, dist_y)
        if wx != 0:
            weights_x[pi] = wx
        if wy != 0:
            weights_y[pi] = wy
    total = Fraction(0)
    for pi, wx in weights_x.items():
        for pj, wy in weights_y.items():
            cs = ConstraintSystem(word, pi, pj, lx, ly, n)
            c = count_constrained(cs, max_work=max_work)
            if c:
                total += Fraction(c) * wx * wy
    total /= Fraction(n ** (1 + k // 2))
    mc = empirical_star_moment(lx, ly, dist_x, dist_y, n, word, trials=trials, seed=seed)
    diff = abs(float(total) - mc.mean)
    tol = 4.0 * mc.std_error
    return ReconstructionCheck(word, n, total, mc, diff, tol, diff <= tol)
