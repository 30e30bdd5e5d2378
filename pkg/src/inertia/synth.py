"""Seeded synthetic inertial-growth trajectories, used as estimator oracles."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .ingest import AnnualSeries

# clamped levels never drop below this fraction of G0
CLAMP_FRACTION = 1e-6


@dataclass(frozen=True)
class NoiseSpec:
    """Level noise: (1-f)*N(0, sigma^2) + f*N(0, (tail_scale*sigma)^2)."""

    sigma: float = 0.0
    tail_fraction: float = 0.0
    tail_scale: float = 1.0
    seed: int | None = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if not 0 <= self.tail_fraction < 0.5:
            raise ValueError("tail_fraction must lie in [0, 0.5)")
        if self.tail_scale < 1:
            raise ValueError("tail_scale must be >= 1")

    def draw(self, size: int, rng: np.random.Generator | None = None) -> np.ndarray:
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        z = rng.standard_normal(size)
        tail = rng.random(size) < self.tail_fraction
        return self.sigma * np.where(tail, self.tail_scale * z, z)


def gen_inertial(G0: float, A: float, start_year: int, n_years: int,
                 noise: NoiseSpec = NoiseSpec(), country: str = "SYN",
                 source: str = "SYNTH") -> AnnualSeries:
    """G(t) = G0 + A*(t - start_year) + eps_t for n_years consecutive years."""
    if not G0 > 0:
        raise ValueError("G0 must be positive")
    if n_years < 2:
        raise ValueError("need at least 2 years")
    t = np.arange(n_years)
    levels = G0 + A * t
    if noise.sigma > 0:
        levels = levels + noise.draw(n_years)
    floor = G0 * CLAMP_FRACTION
    low = levels < floor
    if low.any():
        warnings.warn(f"{country}: {int(low.sum())} level(s) clamped to {floor:g}", stacklevel=2)
        levels = np.where(low, floor, levels)
    return AnnualSeries.from_arrays(country, source, start_year + t, levels)


def replicate(G0: float, A: float, start_year: int, n_years: int, noise: NoiseSpec,
              n_rep: int) -> list[AnnualSeries]:
    """n_rep independent series with child seeds spawned from noise.seed."""
    seqs = np.random.SeedSequence(noise.seed).spawn(n_rep)
    out = []
    for i, ss in enumerate(seqs):
        spec = NoiseSpec(noise.sigma, noise.tail_fraction, noise.tail_scale, int(ss.generate_state(1)[0]))
        out.append(gen_inertial(G0, A, start_year, n_years, spec, country=f"R{i:04d}"))
    return out
