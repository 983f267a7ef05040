"""Counter-based randomness keyed by link values.

Each matrix entry is a deterministic function of (seed, link value): the link
value vector is packed into a 128-bit Philox counter and the seed into the
64-bit Philox key, so equal link values always receive equal draws and the
same seed reproduces shared cells at any matrix size. Philox4x32-10 is
integer-only and fully vectorized here.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = (1 << 64) - 1
_PHILOX_M0 = np.uint64(0xD2511F53)
_PHILOX_M1 = np.uint64(0xCD9E8D57)
_WEYL_0 = np.uint64(0x9E3779B9)
_WEYL_1 = np.uint64(0xBB67AE85)
_FOLD_MULT = np.uint64(0x9E3779B97F4A7C15)

DEFAULT_SEED = 1729


def derive_seed(seed: int, *tags) -> int:
    """Derive an independent 64-bit sub-seed from a seed and hashable tags."""
    h = hashlib.blake2b(repr((seed & _MASK64,) + tags).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _counters_from_values(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pack (N, d) int64 value vectors into four 32-bit counter lanes.

    d <= 2 packs losslessly; larger d folds coordinates through splitmix64
    (collisions are astronomically unlikely but not excluded).
    """
    v = values.reshape(-1, values.shape[-1]).astype(np.int64).view(np.uint64)
    d = v.shape[1]
    if d == 1:
        w0, w1 = v[:, 0], np.zeros(v.shape[0], dtype=np.uint64)
    elif d == 2:
        w0, w1 = v[:, 0], v[:, 1]
    else:
        w0 = np.full(v.shape[0], np.uint64(0x243F6A8885A308D3), dtype=np.uint64)
        w1 = np.full(v.shape[0], np.uint64(0x13198A2E03707344), dtype=np.uint64)
        for c in range(d):
            w0 = _mix64((w0 + v[:, c]) * _FOLD_MULT)
            w1 = _mix64((w1 ^ v[:, c]) * _FOLD_MULT + np.uint64(c + 1))
    return w0 & _MASK32, w0 >> np.uint64(32), w1 & _MASK32, w1 >> np.uint64(32)


def philox_4x32(counters: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray], seed: int,
                rounds: int = 10) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Philox4x32 with the given 64-bit key; returns four 32-bit output lanes as uint64 arrays."""
    c0, c1, c2, c3 = (np.array(c, dtype=np.uint64, copy=True) for c in counters)
    k0 = np.uint64(seed & 0xFFFFFFFF)
    k1 = np.uint64((seed >> 32) & 0xFFFFFFFF)
    for _ in range(rounds):
        p0 = _PHILOX_M0 * c0
        p1 = _PHILOX_M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ k0,
            p1 & _MASK32,
            (p0 >> np.uint64(32)) ^ c3 ^ k1,
            p0 & _MASK32,
        )
        k0 = (k0 + _WEYL_0) & _MASK32
        k1 = (k1 + _WEYL_1) & _MASK32
    return c0, c1, c2, c3


def _uniform_open01(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """53-bit uniform in (0, 1] from two 32-bit lanes."""
    bits = (hi << np.uint64(32)) | lo
    return ((bits >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0 ** -53


def _uniform_half_open01(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """53-bit uniform in [0, 1)."""
    bits = (hi << np.uint64(32)) | lo
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class EntryDistribution:
    """A zero-mean unit-variance entry law with exact raw moments.

    All built-ins have uniformly bounded moments of every order; `moment(m)`
    returns the exact m-th raw moment as an int or Fraction.
    """

    name: str
    transform: Callable[[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]], np.ndarray]
    moment: Callable[[int], Fraction]

    def sample_for_values(self, values: np.ndarray, seed: int) -> np.ndarray:
        """One draw per value vector; deterministic in (seed, value)."""
        lanes = philox_4x32(_counters_from_values(values), seed)
        return self.transform(lanes)

    def __str__(self) -> str:
        return self.name


def _gaussian_transform(lanes) -> np.ndarray:
    o0, o1, o2, o3 = lanes
    u1 = _uniform_open01(o0, o1)
    u2 = _uniform_half_open01(o2, o3)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def _rademacher_transform(lanes) -> np.ndarray:
    o0 = lanes[0]
    return 1.0 - 2.0 * (o0 & np.uint64(1)).astype(np.float64)


_SQRT3 = np.sqrt(3.0)


def _uniform_transform(lanes) -> np.ndarray:
    o0, o1, _, _ = lanes
    return (2.0 * _uniform_half_open01(o0, o1) - 1.0) * _SQRT3


def _gaussian_moment(m: int) -> Fraction:
    if m % 2 == 1:
        return Fraction(0)
    out = 1
    for v in range(m - 1, 0, -2):
        out *= v
    return Fraction(out)


def _rademacher_moment(m: int) -> Fraction:
    return Fraction(1 if m % 2 == 0 else 0)


def _uniform_moment(m: int) -> Fraction:
    # E U^m for U uniform on [-sqrt(3), sqrt(3)]
    if m % 2 == 1:
        return Fraction(0)
    return Fraction(3 ** (m // 2), m + 1)


GAUSSIAN = EntryDistribution("gaussian", _gaussian_transform, _gaussian_moment)
RADEMACHER = EntryDistribution("rademacher", _rademacher_transform, _rademacher_moment)
UNIFORM = EntryDistribution("uniform", _uniform_transform, _uniform_moment)

DISTRIBUTIONS = {d.name: d for d in (GAUSSIAN, RADEMACHER, UNIFORM)}


def parse_distribution(name: str) -> EntryDistribution:
    try:
        return DISTRIBUTIONS[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown distribution {name!r}; choose from {sorted(DISTRIBUTIONS)}") from None
