"""Link functions: integer-vector-valued maps on index pairs that define matrix patterns.

A link function L maps (i, j) with i, j >= 1 to a vector of d integers; a
patterned matrix places the input variable indexed by L(i, j) at cell (i, j).
This module provides the built-in links, epsilon-transposed evaluation, and
the regularity diagnostics (row/column multiplicity Delta, joint injectivity,
linear-pair admissibility) that gate the limit theorems.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded

MAX_GRID_N = 4096


@dataclass(eq=False)
class LinkFunction:
    """A named total map from (i, j) in [1, n]^2 to an integer vector of length dim.

    `fn` must accept broadcastable int64 arrays and return an array of shape
    broadcast(i, j) + (dim,). All indices are 1-based, matching the formulas
    i - j, i + j, etc.
    """

    name: str
    dim: int
    kind: str
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    _grid_cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, i, j) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = self.fn(i, j)
        return np.asarray(out, dtype=np.int64)

    def value(self, i: int, j: int) -> tuple[int, ...]:
        """Scalar convenience: the link value at one cell, as a tuple."""
        return tuple(int(x) for x in self(i, j))

    def value_grid(self, n: int) -> np.ndarray:
        """(n, n, dim) array of values over [1, n]^2; row axis is i."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if n > MAX_GRID_N:
            raise BudgetExceeded(f"grid evaluation capped at n={MAX_GRID_N}")
        ii, jj = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1), indexing="ij")
        return self(ii, jj)

    def code_grid(self, n: int) -> np.ndarray:
        """(n, n) int64 codes, bijective with the value vectors on this grid."""
        key = ("codes", n)
        if key not in self._grid_cache:
            self._grid_cache[key] = _pack_values(self.value_grid(n))
        return self._grid_cache[key]

    def __str__(self) -> str:
        return self.name


def _pack_values(values: np.ndarray) -> np.ndarray:
    """Mixed-radix pack of integer vectors into int64, exact on this grid."""
    flat = values.reshape(-1, values.shape[-1]).astype(np.int64)
    lo = flat.min(axis=0)
    span = flat.max(axis=0) - lo + 1
    code = np.zeros(flat.shape[0], dtype=np.int64)
    total = 1
    for c in range(flat.shape[1]):
        total *= int(span[c])
        if total >= 2 ** 62:
            raise BudgetExceeded("link value range too large to pack exactly")
        code = code * span[c] + (flat[:, c] - lo[c])
    return code.reshape(values.shape[:-1])


def eval_eps(link: LinkFunction, eps: str, i, j) -> np.ndarray:
    """L^eps: the link at (i, j) for eps='1', at the swapped pair for eps='*'."""
    if eps == "1":
        return link(i, j)
    if eps == "*":
        return link(j, i)
    raise ValueError(f"eps must be '1' or '*', got {eps!r}")


# ---------------------------------------------------------------------------
# built-in links

def toeplitz() -> LinkFunction:
    return LinkFunction("toeplitz", 1, "toeplitz", lambda i, j: np.stack([i - j], axis=-1))


def hankel() -> LinkFunction:
    return LinkFunction("hankel", 1, "hankel", lambda i, j: np.stack([i + j], axis=-1))


def sym_toeplitz() -> LinkFunction:
    return LinkFunction("sym-toeplitz", 1, "sym_toeplitz",
                        lambda i, j: np.stack([np.abs(i - j)], axis=-1))


def linear(a: int, b: int, e: int = 0) -> LinkFunction:
    name = f"linear:{a},{b},{e}"
    return LinkFunction(name, 1, "linear", lambda i, j: np.stack([a * i + b * j + e], axis=-1))


def projection(axis: str) -> LinkFunction:
    if axis not in ("i", "j"):
        raise ValueError("projection axis must be 'i' or 'j'")
    if axis == "i":
        fn = lambda i, j: np.stack([np.broadcast_arrays(i, j)[0].copy()], axis=-1)
    else:
        fn = lambda i, j: np.stack([np.broadcast_arrays(i, j)[1].copy()], axis=-1)
    return LinkFunction(f"proj:{axis}", 1, "projection", fn)


# ---------------------------------------------------------------------------
# integer bivariate polynomial links, parsed from text (no user code execution)

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow)
MAX_POLY_EXPONENT = 6


def _compile_poly_expr(text: str) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as e:
        raise ValueError(f"cannot parse polynomial expression {text!r}") from e

    def build(node: ast.AST) -> Callable:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError(f"exponent in {text!r} must be an integer literal")
                exp = node.right.value
                if not 0 <= exp <= MAX_POLY_EXPONENT:
                    raise ValueError(f"exponent must be in [0, {MAX_POLY_EXPONENT}]")
                return lambda i, j: build_pow(left(i, j), exp)
            if isinstance(node.op, ast.Add):
                return lambda i, j: left(i, j) + right(i, j)
            if isinstance(node.op, ast.Sub):
                return lambda i, j: left(i, j) - right(i, j)
            return lambda i, j: left(i, j) * right(i, j)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            inner = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda i, j: -inner(i, j)
            return inner
        if isinstance(node, ast.Name):
            if node.id == "i":
                return lambda i, j: i
            if node.id == "j":
                return lambda i, j: j
            raise ValueError(f"unknown variable {node.id!r}; only 'i' and 'j' are allowed")
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int):
                v = node.value
                return lambda i, j: np.full(np.broadcast_shapes(i.shape, j.shape), v, dtype=np.int64)
            raise ValueError(f"non-integer constant {node.value!r}")
        raise ValueError(f"unsupported syntax in polynomial expression {text!r}")

    def build_pow(base: np.ndarray, exp: int) -> np.ndarray:
        if exp == 0:
            return np.ones_like(base)
        out = base
        for _ in range(exp - 1):
            out = out * base
        return out

    return build(tree)


def poly(exprs: "str | Sequence[str]") -> LinkFunction:
    """Link with one integer polynomial in i, j per output coordinate.

    Accepts a single expression or a sequence; operators + - * ^ only.
    """
    if isinstance(exprs, str):
        exprs = [exprs]
    exprs = [e.strip() for e in exprs]
    if not exprs:
        raise ValueError("poly link needs at least one expression")
    compiled = [_compile_poly_expr(e) for e in exprs]
    tag = ",".join(exprs)

    def fn(i, j):
        return np.stack([c(i, j) for c in compiled], axis=-1)

    return LinkFunction(f"poly:{tag}", len(compiled), "poly", fn)


_FIXED_LINKS = {
    "toeplitz": toeplitz,
    "hankel": hankel,
    "sym-toeplitz": sym_toeplitz,
}


def parse_link(spec: str) -> LinkFunction:
    """Parse a CLI link spec: toeplitz | hankel | sym-toeplitz | linear:a,b,e | proj:i|j | poly:expr[,expr]."""
    spec = spec.strip()
    if spec in _FIXED_LINKS:
        return _FIXED_LINKS[spec]()
    if spec.startswith("linear:"):
        parts = spec[len("linear:"):].split(",")
        if len(parts) not in (2, 3):
            raise ValueError(f"linear link needs a,b[,e], got {spec!r}")
        try:
            nums = [int(p) for p in parts]
        except ValueError as e:
            raise ValueError(f"linear link coefficients must be integers in {spec!r}") from e
        return linear(*nums)
    if spec.startswith("proj:"):
        return projection(spec[len("proj:"):])
    if spec.startswith("poly:"):
        return poly(spec[len("poly:"):].split(","))
    raise ValueError(f"unknown link {spec!r}")


# ---------------------------------------------------------------------------
# regularity diagnostics

@dataclass
class RegularityReport:
    """Row/column multiplicity Delta over a grid of sizes, with a boundedness verdict.

    `verdict` is "bounded" (constant Delta across the grid, `bound` holds the
    value) or "grows" (Delta strictly increased between two consecutive grid
    points). Joint injectivity fields are filled only by pair-level checks;
    the single-link report leaves them None.
    """

    link_name: str
    delta_at_n: dict[int, int]
    verdict: str
    bound: Optional[int] = None
    injectivity: Optional[bool] = None
    counterexample: Optional[tuple[tuple[int, int], tuple[int, int]]] = None


def delta(link: LinkFunction, n: int) -> int:
    """Max multiplicity of a single link value within one row or one column of [1, n]^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    codes = link.code_grid(n)
    best = 1 if n else 0
    for axis in (0, 1):
        lines = codes if axis == 1 else codes.T
        for line in lines:
            _, counts = np.unique(line, return_counts=True)
            m = int(counts.max())
            if m > best:
                best = m
    return best


def regularity_report(link: LinkFunction, n_grid: Sequence[int]) -> RegularityReport:
    n_grid = list(n_grid)
    if len(n_grid) < 2:
        raise ValueError("n_grid must have at least 2 sizes")
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be strictly increasing")
    deltas = {n: delta(link, n) for n in n_grid}
    vals = [deltas[n] for n in n_grid]
    if any(b > a for a, b in zip(vals, vals[1:])):
        return RegularityReport(link.name, deltas, "grows")
    return RegularityReport(link.name, deltas, "bounded", bound=vals[-1])


def pair_regularity(
    lx: LinkFunction, ly: LinkFunction, n_grid: Sequence[int]
) -> tuple[RegularityReport, RegularityReport]:
    """Per-link boundedness verdicts plus the shared joint-injectivity check.

    Injectivity is checked exhaustively at the largest grid size and recorded
    on both reports.
    """
    rx = regularity_report(lx, n_grid)
    ry = regularity_report(ly, n_grid)
    ok, cex = joint_injectivity(lx, ly, max(n_grid))
    rx.injectivity = ry.injectivity = ok
    rx.counterexample = ry.counterexample = cex
    return rx, ry


def joint_injectivity(
    lx: LinkFunction, ly: LinkFunction, n: int
) -> tuple[bool, Optional[tuple[tuple[int, int], tuple[int, int]]]]:
    """Exhaustive injectivity check of (i, j) -> (L_X(i,j), L_Y(i,j)) on [1, n]^2.

    On failure returns the lexicographically smallest counterexample
    ((i, j), (i', j')) with (i, j) < (i', j').
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    cx = lx.code_grid(n).ravel()
    cy = ly.code_grid(n).ravel()
    first: dict[tuple[int, int], int] = {}
    candidates: list[tuple[tuple[int, int], tuple[int, int]]] = []
    seen_dup: set[tuple[int, int]] = set()
    for flat in range(n * n):
        key = (int(cx[flat]), int(cy[flat]))
        if key in first:
            if key not in seen_dup:
                seen_dup.add(key)
                a = first[key]
                candidates.append(((a // n + 1, a % n + 1), (flat // n + 1, flat % n + 1)))
        else:
            first[key] = flat
    if not candidates:
        return True, None
    return False, min(candidates)


_LINEAR_COEFF_NAMES = ("a", "b", "c", "d")


def linear_admissible(a: int, b: int, c: int, d: int, e: int = 0, f: int = 0) -> tuple[bool, list[str]]:
    """Admissibility of the linear pair L_X = a i + b j + e, L_Y = c i + d j + f.

    Requires a, b, c, d nonzero and ad - bc outside {0, +-bd, +-ac}; the
    constant shifts e, f never matter. When a coefficient is zero only the
    zero-coefficient violations are reported, since the determinant exclusions
    presuppose nonzero coefficients.
    """
    del e, f
    zeros = [f"{name}=0" for name, v in zip(_LINEAR_COEFF_NAMES, (a, b, c, d)) if v == 0]
    if zeros:
        return False, zeros
    det = a * d - b * c
    violations = []
    if det == 0:
        violations.append("ad-bc=0")
    if det in (b * d, -b * d):
        violations.append("ad-bc=+-bd")
    if det in (a * c, -a * c):
        violations.append("ad-bc=+-ac")
    return (not violations), violations
