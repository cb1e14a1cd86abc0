"""Haar-measure samplers and seeded, parallel Monte Carlo estimators.

Worker w draws from its own Philox stream spawned from SeedSequence(seed),
accumulates (count, mean, M2) per chunk and the partial statistics are
merged in ascending worker order. Identical (seed, samples, workers)
therefore give bit-identical means.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import sparse

from projlab.errors import OutOfRange
from projlab.lab.indexsets import (
    DEFAULT_CAP, IndexKind, IndexSet, enumerate_indices
)
from projlab.lab.closedforms import rw_coefficient
from projlab.services.workers import WorkerPool
from projlab.shared_state import bus

GROUPS = ("torus", "sphere_complex", "haar_unitary", "boolean")
MAX_HAAR_DIM = 64
CHUNK_ELEMENTS = 1 << 20

ValueSampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    workers: int
    quantity: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.samples < 1:
            raise OutOfRange(f"an estimate needs at least one sample, got {self.samples}")
        if self.stderr < 0:
            raise OutOfRange(f"stderr must be >= 0, got {self.stderr}")

    def interval(self, sigmas: float = 3.0) -> tuple:
        return self.mean - sigmas * self.stderr, self.mean + sigmas * self.stderr

    def scaled(self, factor: float) -> "MCEstimate":
        return MCEstimate(self.mean * factor, self.stderr * abs(factor), self.samples,
                          self.seed, self.workers, self.quantity, dict(self.params))

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "params": dict(self.params),
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "workers": self.workers,
        }


def exact_estimate(value: float, samples: int, seed: int, workers: int,
                   quantity: str, params: dict) -> MCEstimate:
    """An estimator whose integrand is constant: zero variance."""
    return MCEstimate(float(value), 0.0, samples, seed, workers, quantity, params)


# Streams and samplers

def streams(seed: int, workers: int) -> list:
    """One counter-based generator per worker, substream (seed, w)."""
    if workers < 1:
        raise OutOfRange(f"workers must be >= 1, got {workers}")
    children = np.random.SeedSequence(seed).spawn(workers)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def split_samples(samples: int, workers: int) -> list:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def sample(group: str, n: int, rng: np.random.Generator, size: Optional[int] = None,
           corrected: bool = True) -> np.ndarray:
    """Draw from the Haar measure of a compact group (or the cube's counting measure).

    torus: (size, n) unit complex numbers; sphere_complex: (size, n) unit
    vectors; haar_unitary: (size, n, n) matrices; boolean: (size, n) signs.
    ``corrected=False`` skips the QR phase fix and is NOT Haar distributed.
    """
    if n < 1:
        raise OutOfRange(f"group dimension must be >= 1, got {n}")
    shape = 1 if size is None else size
    if group == "torus":
        out = np.exp(2j * np.pi * rng.random((shape, n)))
    elif group == "sphere_complex":
        g = rng.standard_normal((shape, n)) + 1j * rng.standard_normal((shape, n))
        out = g / np.linalg.norm(g, axis=1, keepdims=True)
    elif group == "haar_unitary":
        if n > MAX_HAAR_DIM:
            raise OutOfRange(f"Haar unitaries are limited to n <= {MAX_HAAR_DIM}, got {n}")
        g = (rng.standard_normal((shape, n, n)) + 1j * rng.standard_normal((shape, n, n))) / math.sqrt(2)
        q, r = np.linalg.qr(g)
        if corrected:
            d = np.diagonal(r, axis1=-2, axis2=-1)
            q = q * (d / np.abs(d))[:, None, :]
        out = q
    elif group == "boolean":
        out = (2 * rng.integers(0, 2, size=(shape, n), dtype=np.int8) - 1)
    else:
        raise OutOfRange(f"unknown group {group!r}; expected one of {', '.join(GROUPS)}")
    return out[0] if size is None else out


# Reduction

def _chunk_stats(values: np.ndarray) -> tuple:
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


def _merge(a: tuple, b: tuple) -> tuple:
    """Chan's pairwise update of (count, mean, M2)."""
    na, ma, sa = a
    nb, mb, sb = b
    if na == 0:
        return b
    if nb == 0:
        return a
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _run_worker(sampler: ValueSampler, rng: np.random.Generator, count: int, chunk: int) -> tuple:
    stats = (0, 0.0, 0.0)
    done = 0
    while done < count:
        size = min(chunk, count - done)
        stats = _merge(stats, _chunk_stats(np.asarray(sampler(rng, size), dtype=float)))
        done += size
    return stats


def estimate(sampler: ValueSampler, samples: int, seed: int, workers: int = 1,
             chunk: int = 65536, quantity: str = "", params: Optional[dict] = None) -> MCEstimate:
    """Mean of sampler values over ``samples`` draws; stderr = sd / sqrt(samples)."""
    if samples < 1:
        raise OutOfRange(f"samples must be >= 1, got {samples}")
    rngs = streams(seed, workers)
    counts = split_samples(samples, workers)
    chunk = max(1, int(chunk))
    tasks = [(lambda rng=rng, c=c: _run_worker(sampler, rng, c, chunk)) for rng, c in zip(rngs, counts)]
    parts = WorkerPool(workers).run(tasks, label=quantity or "estimate")

    total = (0, 0.0, 0.0)
    for part in parts:
        total = _merge(total, part)
    n, mean, m2 = total
    stderr = math.sqrt(m2 / (n - 1)) / math.sqrt(n) if n > 1 else 0.0
    return MCEstimate(mean, stderr, samples, seed, workers, quantity, dict(params or {}))


# Estimators

def _exponent_operator(J: IndexSet) -> sparse.csr_matrix:
    return sparse.csr_matrix(J.exponent_matrix().astype(float))


def torus_exp_sum(J: IndexSet, samples: int, seed: int, workers: int = 1,
                  power: int = 1) -> MCEstimate:
    """E |sum_{alpha in J} z^alpha|^power over the torus T^n."""
    if len(J) < 1:
        raise OutOfRange("torus_exp_sum needs a nonempty index set")
    params = {"n": J.dimension, "size": len(J), "power": power}
    if len(J) == 1:
        return exact_estimate(1.0, samples, seed, workers, "torus_exp_sum", params)
    exps = _exponent_operator(J)
    size = len(J)

    def values(rng: np.random.Generator, k: int) -> np.ndarray:
        theta = rng.random((k, J.dimension))
        # frequencies alpha . theta reduced mod 1 before exponentiating
        freq = np.mod(np.asarray((exps @ theta.T).T), 1.0)
        return np.abs(np.exp(2j * np.pi * freq).sum(axis=1)) ** power

    bus.log_action(f"torus_exp_sum: |J|={size}, n={J.dimension}, samples={samples}, workers={workers}")
    return estimate(values, samples, seed, workers, chunk=max(1, CHUNK_ELEMENTS // size),
                    quantity="torus_exp_sum", params=params)


def trace_abs_moment(n: int, samples: int, seed: int, workers: int = 1,
                     power: int = 1) -> MCEstimate:
    """E |tr U|^power over Haar unitaries U in U(n)."""
    if n < 1:
        raise OutOfRange(f"trace moments need n >= 1, got {n}")
    params = {"n": n, "power": power}
    if n == 1:
        return exact_estimate(1.0, samples, seed, workers, "trace_abs_moment", params)

    def values(rng: np.random.Generator, k: int) -> np.ndarray:
        u = sample("haar_unitary", n, rng, k)
        return np.abs(np.trace(u, axis1=1, axis2=2)) ** power

    return estimate(values, samples, seed, workers, chunk=max(1, (CHUNK_ELEMENTS // 4) // (n * n)),
                    quantity="trace_abs_moment", params=params)


def trace_class(n: int, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Projection constant of the n x n trace class: n E|tr U|."""
    bus.log_action(f"trace_class: n={n}, samples={samples}, workers={workers}")
    est = trace_abs_moment(n, samples, seed, workers).scaled(n)
    return MCEstimate(est.mean, est.stderr, samples, seed, workers, "trace_class", {"n": n})


def sphere_invariant(n: int, degrees: Sequence[int], samples: int, seed: int, workers: int = 1,
                     z: Optional[np.ndarray] = None) -> MCEstimate:
    """E |sum_k c_k(n) <z, xi>^k| over xi on the complex unit sphere (z = e_1 by default)."""
    if n < 2:
        raise OutOfRange(f"sphere_invariant needs n >= 2, got {n}")
    ks = sorted(set(int(k) for k in degrees))
    if not ks or ks[0] < 0:
        raise OutOfRange(f"degrees must be nonnegative and nonempty, got {degrees}")
    if z is None:
        z = np.zeros(n, dtype=complex)
        z[0] = 1.0
    z = np.asarray(z, dtype=complex)
    if z.shape != (n,) or not math.isclose(float(np.linalg.norm(z)), 1.0, rel_tol=1e-12):
        raise OutOfRange("z must be a unit vector of length n")
    params = {"n": n, "degrees": ks}
    if ks == [0]:
        return exact_estimate(1.0, samples, seed, workers, "sphere_invariant", params)

    coeffs = np.zeros(ks[-1] + 1)
    for k in ks:
        coeffs[k] = float(rw_coefficient(n, k))
    zc = np.conj(z)

    def values(rng: np.random.Generator, k: int) -> np.ndarray:
        xi = sample("sphere_complex", n, rng, k)
        w = np.conj(xi @ zc)
        return np.abs(np.polynomial.polynomial.polyval(w, coeffs))

    bus.log_action(f"sphere_invariant: n={n}, degrees={ks}, samples={samples}")
    return estimate(values, samples, seed, workers, chunk=max(1, CHUNK_ELEMENTS // n),
                    quantity="sphere_invariant", params=params)


def dirichlet_index_set(x: float, m: Optional[int] = None, cap: int = DEFAULT_CAP) -> IndexSet:
    """Delta(x), or Delta(x, m) for m-homogeneous Dirichlet polynomials."""
    if x < 2:
        raise OutOfRange(f"Dirichlet sets need x >= 2, got {x}")
    if m is None:
        return enumerate_indices(IndexKind.PRIME_GENERATED, x=x, cap=cap)
    return enumerate_indices(IndexKind.PRIME_HOMOG, m=m, x=x, cap=cap)


def dirichlet_projection(x: float, m: Optional[int] = None, samples: int = 200000,
                         seed: int = 20240601, workers: int = 1,
                         cap: int = DEFAULT_CAP) -> MCEstimate:
    """Projection constant of Dirichlet polynomials of length x via the Bohr lift."""
    J = dirichlet_index_set(x, m, cap)
    if len(J) == 0:
        raise OutOfRange(f"no integers n <= {x} with {m} prime factors")
    est = torus_exp_sum(J, samples, seed, workers)
    params = {"x": x, "m": m, "size": len(J), "primes": J.dimension}
    return MCEstimate(est.mean, est.stderr, samples, seed, workers, "dirichlet_projection", params)


def dirichlet_time_average(x: float, T: float = 1e6, samples: int = 200000,
                           seed: int = 20240601, workers: int = 1) -> MCEstimate:
    """(1/T) int_0^T |sum_{n <= x} n^(-it)| dt, estimated at uniform random t."""
    if x < 1:
        raise OutOfRange(f"x must be >= 1, got {x}")
    if not T > 0:
        raise OutOfRange(f"T must be positive, got {T}")
    logs = np.log(np.arange(1, int(math.floor(x)) + 1, dtype=float))

    def values(rng: np.random.Generator, k: int) -> np.ndarray:
        t = T * rng.random(k)
        return np.abs(np.exp(-1j * np.outer(t, logs)).sum(axis=1))

    return estimate(values, samples, seed, workers, chunk=max(1, CHUNK_ELEMENTS // len(logs)),
                    quantity="dirichlet_time_average", params={"x": x, "T": T})


def harper_shape(x: float) -> float:
    """sqrt(x) / (log log x)^(1/4)."""
    if x <= math.e:
        raise OutOfRange(f"the shape sqrt(x)/(log log x)^(1/4) needs x > e, got {x}")
    return math.sqrt(x) / math.log(math.log(x)) ** 0.25


def harper_shape_table(xs: Sequence[float], samples: int = 200000, seed: int = 20240601,
                       workers: int = 1) -> list:
    """Rows of estimate / shape for growing x; no bound is asserted on the ratio."""
    rows = []
    for x in xs:
        est = dirichlet_projection(x, samples=samples, seed=seed, workers=workers)
        shape = harper_shape(x)
        rows.append({
            "x": x,
            "estimate": est.mean,
            "stderr": est.stderr,
            "shape": shape,
            "ratio": est.mean / shape,
        })
    return rows
