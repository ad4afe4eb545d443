"""Metropolis-within-Gibbs sampler for the beta log-gas.

Target density on R^N:
    prod_{i<j} |l_i - l_j|^(2 beta) * exp(-(N/T) sum_i V(l_i)).
Each update picks a uniform index, proposes a Gaussian move and accepts with
probability min(1, exp(delta)), delta computed incrementally in O(N).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numba
import numpy as np

from .errors import Collision
from .numerics import RngStream
from .potentials import Potential

COLLISION_DIST = 1e-300
THREADS_ENV = "SPECTRALGAS_THREADS"


@dataclass(frozen=True)
class GasConfig:
    n: int
    temperature: float
    beta: float
    potential: Potential
    proposal_sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if not (self.temperature > 0 and self.beta > 0 and self.proposal_sigma > 0):
            raise ValueError("temperature, beta and proposal_sigma must be positive")

    @property
    def vcoef(self) -> np.ndarray:
        return np.ascontiguousarray(self.potential.coefficients, dtype=np.float64)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "temperature": self.temperature,
            "beta": self.beta,
            "potential": json.loads(self.potential.to_json()),
            "proposal_sigma": self.proposal_sigma,
            "seed": self.seed,
        }


@dataclass
class ChainState:
    eigenvalues: np.ndarray
    proposals: int = 0
    accepted: int = 0
    rng: RngStream = field(default_factory=lambda: RngStream(0))
    collisions: int = 0
    generator: np.random.Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.generator is None:
            self.generator = self.rng.generator()

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposals if self.proposals else 0.0


def init_state(config: GasConfig, stream_id: int = 0) -> ChainState:
    k = np.arange(1, config.n + 1)
    lam = (-1.0) ** k * 2.0 * k / config.n
    return ChainState(lam, rng=RngStream(config.seed, stream_id))


@numba.njit(cache=True, nogil=True)
def _horner(c, x):
    out = 0.0
    for k in range(c.shape[0] - 1, -1, -1):
        out = out * x + c[k]
    return out


@numba.njit(cache=True, nogil=True)
def _delta(lam, i, new, vcoef, n_over_t, two_beta):
    """(delta, collided) for moving lam[i] to new."""
    old = lam[i]
    acc = 0.0
    for j in range(lam.shape[0]):
        if j == i:
            continue
        d_new = abs(new - lam[j])
        if d_new < COLLISION_DIST:
            return -np.inf, True
        acc += np.log(d_new) - np.log(abs(old - lam[j]))
    return -n_over_t * (_horner(vcoef, new) - _horner(vcoef, old)) + two_beta * acc, False


@numba.njit(cache=True, nogil=True)
def _sweep_kernel(lam, vcoef, n_over_t, two_beta, sigma, idx, noise, logu):
    accepted = 0
    collided = 0
    for k in range(idx.shape[0]):
        i = idx[k]
        new = lam[i] + sigma * noise[k]
        d, hit = _delta(lam, i, new, vcoef, n_over_t, two_beta)
        if hit:
            collided += 1
        elif logu[k] < d:
            lam[i] = new
            accepted += 1
    return accepted, collided


def log_accept_delta(state: ChainState, config: GasConfig, index: int, proposal: float) -> float:
    """Log acceptance ratio for moving eigenvalue ``index`` (0-based) to ``proposal``."""
    d, hit = _delta(
        state.eigenvalues, int(index), float(proposal), config.vcoef,
        config.n / config.temperature, 2.0 * config.beta,
    )
    if hit:
        raise Collision(f"proposal {proposal} collides with an existing eigenvalue")
    return float(d)


def log_density(lam, config: GasConfig) -> float:
    """Unnormalized log-density, recomputed from scratch (testing oracle)."""
    lam = np.asarray(lam, dtype=float)
    diff = np.abs(lam[:, None] - lam[None, :])
    iu = np.triu_indices(len(lam), 1)
    return float(
        -config.n / config.temperature * np.sum(config.potential(lam))
        + 2.0 * config.beta * np.sum(np.log(diff[iu]))
    )


def sweep(state: ChainState, config: GasConfig, n_sweeps: int = 1) -> ChainState:
    """N * n_sweeps single-site updates, in place; returns the same state."""
    if n_sweeps < 1:
        raise ValueError("n_sweeps must be >= 1")
    n = config.n
    gen = state.generator
    vcoef = config.vcoef
    n_over_t = n / config.temperature
    two_beta = 2.0 * config.beta
    for _ in range(n_sweeps):
        idx = gen.integers(0, n, size=n)
        noise = gen.standard_normal(n)
        logu = np.log(gen.random(n))
        acc, col = _sweep_kernel(
            state.eigenvalues, vcoef, n_over_t, two_beta, config.proposal_sigma, idx, noise, logu
        )
        state.proposals += n
        state.accepted += int(acc)
        state.collisions += int(col)
    return state


@dataclass
class SampleSet:
    samples: np.ndarray  # (n_chains * n_samples, N), chain-major
    proposals: int
    accepted: int
    collisions: int
    n_chains: int = 1

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposals if self.proposals else 0.0

    @property
    def pooled(self) -> np.ndarray:
        return self.samples.ravel()


def _run_chain(config, n_samples, burnin_sweeps, thin_sweeps, stream_id):
    state = init_state(config, stream_id)
    if burnin_sweeps:
        sweep(state, config, burnin_sweeps)
    out = np.empty((n_samples, config.n))
    for k in range(n_samples):
        if k:
            sweep(state, config, thin_sweeps)
        out[k] = state.eigenvalues
    return out, state


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = requested or os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def sample_ensemble(
    config: GasConfig,
    n_samples: int,
    burnin_sweeps: int = 200,
    thin_sweeps: int = 10,
    n_chains: int = 1,
    threads: int | None = None,
) -> SampleSet:
    """Burn in, then record one eigenvalue vector every ``thin_sweeps`` sweeps.

    The first record is taken right after burn-in, so n_samples=1 with
    burnin_sweeps=50 returns the state after 50 sweeps. Chains use stream ids
    0..n_chains-1 and are merged in chain order whatever the thread layout.
    """
    if n_samples < 1 or burnin_sweeps < 0 or thin_sweeps < 1 or n_chains < 1:
        raise ValueError("invalid sampling schedule")
    workers = min(worker_count(threads), n_chains)
    args = [(config, n_samples, burnin_sweeps, thin_sweeps, c) for c in range(n_chains)]
    if workers == 1:
        results = [_run_chain(*a) for a in args]
    else:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda a: _run_chain(*a), args))
    samples = np.concatenate([r[0] for r in results])
    return SampleSet(
        samples,
        proposals=sum(r[1].proposals for r in results),
        accepted=sum(r[1].accepted for r in results),
        collisions=sum(r[1].collisions for r in results),
        n_chains=n_chains,
    )


def write_samples_csv(path, samples: np.ndarray) -> None:
    n = samples.shape[1]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(f"lambda_{i}" for i in range(1, n + 1)) + "\n")
        for row in samples:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_samples_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_sidecar(path, config: GasConfig, result: SampleSet, **extra) -> None:
    meta = {
        "config": config.to_dict(),
        "proposals": result.proposals,
        "accepted": result.accepted,
        "collisions": result.collisions,
        "acceptance_rate": result.acceptance_rate,
        "n_chains": result.n_chains,
        **extra,
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
