"""Eigenvalues of sampled ensembles and summaries of empirical spectral measures.

The circular-law comparison is radial + angular: Kolmogorov-Smirnov distance
of the |lambda| CDF against r^2 on [0, 1] (the radial law of the uniform unit
disk), fractions inside a few disks, and the max deviation of a 16-bin angular
histogram from uniform. These are diagnostics, never convergence claims.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ensemble import sample_product
from .errors import BudgetExceeded
from .links import LinkFunction, regularity_report
from .rng import DEFAULT_SEED, EntryDistribution

MAX_EIG_N = 4096
_DISK_RADII = (1.0, 1.05, 1.1)
_ANGULAR_BINS = 16


@dataclass
class SpectrumStats:
    """Summary statistics of one (scaled) eigenvalue cloud."""

    n: int
    eigenvalues: np.ndarray
    mean_abs_sq: float
    disk_fractions: dict[float, float]
    radial_ks: float
    angular_max_dev: float
    spectral_radius: float
    flags: list[str] = field(default_factory=list)

    def disk_fraction(self, r: float) -> float:
        if r in self.disk_fractions:
            return self.disk_fractions[r]
        return float(np.mean(np.abs(self.eigenvalues) <= r))

    def to_json_dict(self, seed: Optional[int] = None) -> dict:
        out = {
            "n": self.n,
            "mean_abs_sq": self.mean_abs_sq,
            "disk_fraction_1": self.disk_fractions[1.0],
            "disk_fraction_1_05": self.disk_fractions[1.05],
            "disk_fraction_1_1": self.disk_fractions[1.1],
            "radial_ks": self.radial_ks,
            "angular_max_dev": self.angular_max_dev,
            "spectral_radius": self.spectral_radius,
            "diagnostic": True,
            "flags": list(self.flags),
        }
        if seed is not None:
            out["seed"] = seed
        return out


def eigenvalues(m: np.ndarray, allow_large: bool = False) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a dense real square matrix."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_EIG_N and not allow_large:
        raise BudgetExceeded(f"eigenvalue solve capped at n={MAX_EIG_N}; pass allow_large to override")
    vals = np.linalg.eigvals(a)
    if not np.all(np.isfinite(vals)):
        raise RuntimeError("eigenvalue solver returned non-finite values")
    return vals


def _radial_ks(radii: np.ndarray) -> float:
    """sup over [0, 1] of |empirical CDF of |lambda| - r^2|."""
    rs = np.sort(radii)
    n = len(rs)
    f_at = np.arange(1, n + 1) / n
    f_before = np.arange(n) / n
    inside = rs <= 1.0
    best = abs(float(np.mean(inside)) - 1.0)  # endpoint r = 1
    if inside.any():
        t = rs[inside] ** 2
        best = max(best,
                   float(np.max(np.abs(f_at[inside] - t))),
                   float(np.max(np.abs(f_before[inside] - t))))
    return best


def esm_stats(eigs: Sequence[complex], scale: float = 1.0) -> SpectrumStats:
    """Statistics of the eigenvalue cloud scaled by `scale`, against the unit-disk law."""
    vals = np.asarray(eigs, dtype=np.complex128) * scale
    if vals.size == 0:
        raise ValueError("need at least one eigenvalue")
    radii = np.abs(vals)
    fractions = {r: float(np.mean(radii <= r)) for r in _DISK_RADII}
    angles = np.angle(vals)
    hist, _ = np.histogram(angles, bins=_ANGULAR_BINS, range=(-math.pi, math.pi))
    angular_dev = float(np.max(np.abs(hist / vals.size - 1.0 / _ANGULAR_BINS)))
    return SpectrumStats(
        n=int(vals.size),
        eigenvalues=vals,
        mean_abs_sq=float(np.mean(radii ** 2)),
        disk_fractions=fractions,
        radial_ks=_radial_ks(radii),
        angular_max_dev=angular_dev,
        spectral_radius=float(radii.max()),
    )


def write_eigs_csv(eigs: np.ndarray, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("re,im\n")
        for v in eigs:
            fh.write(f"{v.real:.17g},{v.imag:.17g}\n")


def figure_data(
    lx: LinkFunction,
    ly: LinkFunction,
    dist: EntryDistribution,
    n: int,
    seed: int = DEFAULT_SEED,
    csv_path: Optional[str] = None,
    json_path: Optional[str] = None,
    allow_large: bool = False,
) -> SpectrumStats:
    """Eigenvalue cloud of the n^{-1/2}-scaled product, with optional file dumps.

    Flags a regularity violation (row/column multiplicity growing with n) for
    either link; the emitted statistics stay purely diagnostic either way.
    """
    if n > MAX_EIG_N and not allow_large:
        raise BudgetExceeded(f"figure capped at n={MAX_EIG_N}; pass allow_large to override")
    m = sample_product(lx, ly, dist, dist, n, seed)
    eigs = eigenvalues(m.entries, allow_large=allow_large)
    stats = esm_stats(eigs, scale=1.0 / math.sqrt(n))
    probe = [g for g in (8, 16, 32) if g <= max(n, 8)]
    for link in (lx, ly):
        rep = regularity_report(link, probe)
        if rep.verdict == "grows":
            stats.flags.append(f"assumption2-violation:{link.name}")
    if csv_path is not None:
        write_eigs_csv(stats.eigenvalues, csv_path)
    if json_path is not None:
        with open(json_path, "w") as fh:
            json.dump(stats.to_json_dict(seed=seed), fh, sort_keys=True, indent=2)
            fh.write("\n")
    return stats
