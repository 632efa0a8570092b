"""Independent Monte Carlo oracle for the co-phased received SNR.

Per trial the oracle draws every envelope (cascade pairs per element plus
the direct link), forms

    Z = sum_l rho_l * sum_m sqrt(beta_lm^-1) |g_lm| |h_lm|
        + rho_0 sqrt(beta_0^-1) |h_0|,

sets SNR = gamma_teff * Z^2, and averages log2(1 + SNR).  gamma_teff is
the deterministic effective transmit SNR computed upstream from the
expected effective-noise power; the oracle does not re-draw the
outdated-CSI noise per realization (that would estimate a different
quantity).

Determinism contract: trials are partitioned into fixed-size blocks and
block i draws from an independent Philox substream keyed (seed, i).
Per-block partial sums are reduced in block order with exact summation
(math.fsum), so the result is bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import RicianParams, sample_rician_envelope
from .errors import InvalidScenario


@dataclass(frozen=True)
class TrialConfig:
    """Trial count, RNG seed, and the deterministic block partition.

    (trials, seed, block_size) fully determine every estimate; worker
    count never does.
    """

    trials: int
    seed: int
    block_size: int = 2048

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class McEstimate:
    """Sample-mean capacity with its standard error."""

    mean_ec: float
    std_error: float
    snr_samples: Optional[np.ndarray] = None


@dataclass(frozen=True)
class PanelChannel:
    """Sampling inputs for one panel's cascaded links."""

    beta_inv: np.ndarray
    rho: float
    k1: float
    k2: float
    los_phase_h: float = 0.0
    los_phase_g: float = 0.0

    def __post_init__(self):
        beta_inv = np.asarray(self.beta_inv, dtype=float)
        object.__setattr__(self, "beta_inv", beta_inv)
        if beta_inv.ndim != 1 or beta_inv.size == 0:
            raise ValueError("beta_inv must be a non-empty 1-D array")
        if np.any(~np.isfinite(beta_inv)) or np.any(beta_inv < 0):
            raise ValueError("inverse loss factors must be finite and >= 0")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError("rho must lie in [0, 1]")


@dataclass(frozen=True)
class SnrEnsemble:
    """Everything the oracle needs: resolved path losses, fading factors,
    aging coefficients, and the precomputed effective transmit SNR."""

    panels: tuple[PanelChannel, ...]
    beta0_inv: float
    rho0: float
    k0: float
    gamma_teff: float
    los_phase_direct: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "panels", tuple(self.panels))
        if self.beta0_inv < 0:
            raise ValueError("direct inverse loss must be >= 0")
        if not (0.0 <= self.rho0 <= 1.0):
            raise ValueError("rho0 must lie in [0, 1]")
        if self.gamma_teff <= 0:
            raise ValueError("gamma_teff must be positive")
        if not self.panels and self.beta0_inv == 0:
            raise InvalidScenario("no reflecting elements and no direct link")


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    """Philox substream for one block; keys (seed, index) never collide."""
    key = np.array([seed, block_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _block_envelope_sum(ensemble: SnrEnsemble, rng, n: int) -> np.ndarray:
    """Draw n trials of the co-phased envelope sum Z.

    Draw order is fixed (panels in order, BS-side fade then user-side fade,
    direct link last) so a block's samples depend only on its substream.
    """
    z = np.zeros(n)
    for panel in ensemble.panels:
        m = panel.beta_inv.size
        h = sample_rician_envelope(
            RicianParams(panel.k1), rng, panel.los_phase_h, size=(n, m)
        )
        g = sample_rician_envelope(
            RicianParams(panel.k2), rng, panel.los_phase_g, size=(n, m)
        )
        z += panel.rho * ((h * g) @ np.sqrt(panel.beta_inv))
    h0 = sample_rician_envelope(
        RicianParams(ensemble.k0), rng, ensemble.los_phase_direct, size=n
    )
    z += ensemble.rho0 * math.sqrt(ensemble.beta0_inv) * h0
    return z


def _block_plan(cfg: TrialConfig) -> list[tuple[int, int]]:
    """(block_index, trials_in_block) pairs covering cfg.trials."""
    plan = []
    done = 0
    index = 0
    while done < cfg.trials:
        n = min(cfg.block_size, cfg.trials - done)
        plan.append((index, n))
        done += n
        index += 1
    return plan


def _run_blocks(ensemble: SnrEnsemble, cfg: TrialConfig, workers: int, worker_fn):
    plan = _block_plan(cfg)

    def task(item):
        index, n = item
        rng = _block_rng(cfg.seed, index)
        z = _block_envelope_sum(ensemble, rng, n)
        return worker_fn(z)

    if workers <= 1:
        return [task(item) for item in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, plan))


def _mean_and_stderr(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    if n < 2:
        return mean, 0.0
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return mean, math.sqrt(var / n)


def simulate_ec(
    ensemble: SnrEnsemble,
    cfg: TrialConfig,
    workers: int = 1,
    keep_samples: bool = False,
) -> McEstimate:
    """Estimate the ergodic capacity; bit-identical for any worker count."""

    def reduce_block(z: np.ndarray):
        snr = ensemble.gamma_teff * z * z
        ec = np.log2(1.0 + snr)
        return float(np.sum(ec)), float(np.sum(ec * ec)), snr if keep_samples else None

    parts = _run_blocks(ensemble, cfg, workers, reduce_block)
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    mean, stderr = _mean_and_stderr(total, total_sq, cfg.trials)
    samples = np.concatenate([p[2] for p in parts]) if keep_samples else None
    return McEstimate(mean_ec=mean, std_error=stderr, snr_samples=samples)


def empirical_snr_cdf(
    ensemble: SnrEnsemble,
    cfg: TrialConfig,
    grid: Sequence[float],
    workers: int = 1,
) -> np.ndarray:
    """Empirical P(SNR <= g) on the given grid."""
    estimate = simulate_ec(ensemble, cfg, workers=workers, keep_samples=True)
    samples = np.sort(estimate.snr_samples)
    grid = np.asarray(grid, dtype=float)
    return np.searchsorted(samples, grid, side="right") / samples.size


@dataclass(frozen=True)
class EnvelopeMomentEstimate:
    """Sample mean and raw second moment of Z with standard errors."""

    mean: float
    second_moment: float
    se_mean: float
    se_second_moment: float


def simulate_envelope_moments(
    ensemble: SnrEnsemble, cfg: TrialConfig, workers: int = 1
) -> EnvelopeMomentEstimate:
    """Sample moments of the envelope sum itself (validates the analytic
    moment layer independently of the capacity layer)."""

    def reduce_block(z: np.ndarray):
        z2 = z * z
        return (
            float(np.sum(z)),
            float(np.sum(z2)),
            float(np.sum(z2)),
            float(np.sum(z2 * z2)),
        )

    parts = _run_blocks(ensemble, cfg, workers, reduce_block)
    n = cfg.trials
    mean, se_mean = _mean_and_stderr(
        math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts), n
    )
    m2, se_m2 = _mean_and_stderr(
        math.fsum(p[2] for p in parts), math.fsum(p[3] for p in parts), n
    )
    return EnvelopeMomentEstimate(
        mean=mean, second_moment=m2, se_mean=se_mean, se_second_moment=se_m2
    )
