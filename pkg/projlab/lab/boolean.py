"""Projection constants of function classes on the Boolean cube {-1, 1}^N."""

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, List, Optional, Sequence

import numpy as np

from projlab.errors import (
    BudgetExceeded, EnumerationTooLarge, InvariantViolation, OutOfRange, ParseError
)
from projlab.lab.closedforms import gaussian_abs_moment
from projlab.lab.indexsets import MultiIndex, even_indices
from projlab.lab.montecarlo import MCEstimate, estimate, sample
from projlab.services.workers import WorkerPool
from projlab.shared_state import bus

EXACT_CAP = 26
LOW_BITS = 12
BATCH = 256
CDKN_MAX_N = 14
MAX_PD_DEGREE = 20
KLIMEK_FACTOR = 1.0 + math.sqrt(2.0)


class FamilyKind(Enum):
    HOMOG = "homog"
    UP_TO = "upto"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SubsetFamily:
    """Subsets S of {0, ..., N-1} as bitmasks; f = sum_S chi_S."""
    N: int
    sets: tuple
    kind: FamilyKind = FamilyKind.CUSTOM
    d: Optional[int] = None

    def __post_init__(self):
        if self.N < 1:
            raise OutOfRange(f"cube dimension must be >= 1, got {self.N}")
        masks = tuple(sorted(set(int(s) for s in self.sets)))
        for s in masks:
            if s < 0 or s >> self.N:
                raise OutOfRange(f"bitmask {s} does not fit in {self.N} bits")
        if self.kind is FamilyKind.HOMOG and any(bin(s).count("1") != self.d for s in masks):
            raise OutOfRange(f"homog({self.d}) members must have popcount {self.d}")
        object.__setattr__(self, "sets", masks)

    @classmethod
    def homog(cls, d: int, N: int) -> "SubsetFamily":
        if not 0 <= d <= N:
            raise OutOfRange(f"need 0 <= d <= N, got d={d}, N={N}")
        return cls(N, tuple(_mask(c) for c in combinations(range(N), d)), FamilyKind.HOMOG, d)

    @classmethod
    def upto(cls, d: int, N: int) -> "SubsetFamily":
        if d < 0:
            raise OutOfRange(f"need d >= 0, got {d}")
        sets = tuple(_mask(c) for e in range(min(d, N) + 1) for c in combinations(range(N), e))
        return cls(N, sets, FamilyKind.UP_TO, d)

    @classmethod
    def custom(cls, N: int, sets: Sequence[int]) -> "SubsetFamily":
        return cls(N, tuple(sets), FamilyKind.CUSTOM, None)

    @classmethod
    def parse(cls, text: str, N: int) -> "SubsetFamily":
        """"homog:d", "upto:d" or a JSON list of bitmasks."""
        text = text.strip()
        try:
            if text.startswith("["):
                return cls.custom(N, [int(s) for s in json.loads(text)])
            name, _, arg = text.partition(":")
            name = name.strip().lower()
            if name == "homog":
                return cls.homog(int(arg), N)
            if name == "upto":
                return cls.upto(int(arg), N)
        except (ValueError, TypeError) as e:
            raise ParseError(f"bad subset family {text!r}: {e}") from e
        raise ParseError(f"unknown subset family {text!r}; expected homog:d, upto:d or a JSON list")

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def degree(self) -> int:
        return max((bin(s).count("1") for s in self.sets), default=0)

    def describe(self) -> str:
        if self.kind is FamilyKind.CUSTOM:
            return f"custom[{len(self)}] N={self.N}"
        return f"{self.kind.value}:{self.d} N={self.N}"

    def incidence(self) -> np.ndarray:
        """N x |family| 0/1 matrix, entry (k, S) = [k in S]."""
        masks = np.asarray(self.sets, dtype=np.int64)
        return ((masks[None, :] >> np.arange(self.N)[:, None]) & 1).astype(np.int64)


def _mask(positions: Sequence[int]) -> int:
    return sum(1 << i for i in positions)


# Exact enumeration

def gray_flips(bits: int) -> Iterator[int]:
    """Bit indices to flip, in order, to walk the reflected Gray code from 0."""
    for k in range(1, 1 << bits):
        yield (k & -k).bit_length() - 1


def _characters(assignments: np.ndarray, masks: np.ndarray, bits: int) -> np.ndarray:
    """chi_S(x) for each assignment (rows) and mask (columns); bit set means x_k = -1."""
    parity = np.zeros((assignments.shape[0], masks.shape[0]), dtype=np.int64)
    for b in range(bits):
        parity ^= ((assignments[:, None] >> b) & 1) & ((masks[None, :] >> b) & 1)
    return (1 - 2 * parity).astype(float)


def _block_sums(values: np.ndarray) -> tuple:
    # entries are integers far below 2^53, so float sums are exact
    return int(np.abs(values).sum()), int((values * values).sum())


class _CubeSweep:
    """Exact sums of |f| and f^2 over the cube.

    Low bits are handled by one dense character table, the middle bits by a
    Gray-code walk that negates the members containing the flipped bit, and
    the top bits are fixed per task.
    """

    def __init__(self, family: SubsetFamily, top_bits: int):
        self.family = family
        N = family.N
        self.low = min(N, LOW_BITS)
        self.top = min(top_bits, N - self.low)
        self.mid = N - self.low - self.top
        masks = np.asarray(family.sets, dtype=np.int64)
        self.masks = masks
        self.low_table = _characters(np.arange(1 << self.low, dtype=np.int64),
                                     masks & ((1 << self.low) - 1), self.low)
        self.containing = [np.flatnonzero((masks >> (self.low + j)) & 1) for j in range(self.mid)]

    def task(self, top_value: int) -> tuple:
        start = np.asarray([top_value << (self.low + self.mid)], dtype=np.int64)
        v = _characters(start, self.masks, self.family.N)[0]
        abs_total, sq_total = 0, 0
        batch = [v.copy()]
        for j in gray_flips(self.mid):
            v[self.containing[j]] *= -1.0
            batch.append(v.copy())
            if len(batch) == BATCH:
                a, s = _block_sums(self.low_table @ np.stack(batch, axis=1))
                abs_total, sq_total = abs_total + a, sq_total + s
                batch = []
        if batch:
            a, s = _block_sums(self.low_table @ np.stack(batch, axis=1))
            abs_total, sq_total = abs_total + a, sq_total + s
        return abs_total, sq_total


def boolean_exact_sums(family: SubsetFamily, workers: int = 1, cap: int = EXACT_CAP) -> tuple:
    """(sum |f(x)|, sum f(x)^2) over all 2^N sign vectors, as integers."""
    if family.N > cap:
        raise EnumerationTooLarge(f"cube of dimension {family.N} (use the Monte Carlo path)",
                                  1 << family.N, 1 << cap)
    if len(family) == 0:
        return 0, 0
    top_bits = (workers - 1).bit_length() if workers > 1 else 0
    sweep = _CubeSweep(family, top_bits)
    tasks = [(lambda t=t: sweep.task(t)) for t in range(1 << sweep.top)]
    bus.log_action(f"boolean exact sweep: {family.describe()}, |family|={len(family)}, "
                   f"{len(tasks)} task(s)")
    parts = WorkerPool(workers).run(tasks, label=f"boolean {family.describe()}")
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


def boolean_proj_exact_fraction(family: SubsetFamily, workers: int = 1,
                                cap: int = EXACT_CAP) -> Fraction:
    abs_total, _ = boolean_exact_sums(family, workers, cap)
    return Fraction(abs_total, 1 << family.N)


def boolean_proj_exact(family: SubsetFamily, workers: int = 1, cap: int = EXACT_CAP) -> float:
    """E|sum_S chi_S| over the uniform cube, computed exactly."""
    return float(boolean_proj_exact_fraction(family, workers, cap))


def boolean_second_moment_exact(family: SubsetFamily, workers: int = 1,
                                cap: int = EXACT_CAP) -> Fraction:
    _, sq_total = boolean_exact_sums(family, workers, cap)
    return Fraction(sq_total, 1 << family.N)


def boolean_proj_mc(family: SubsetFamily, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """Monte Carlo estimate of E|sum_S chi_S| from uniform random signs."""
    inc = family.incidence()

    def values(rng: np.random.Generator, k: int) -> np.ndarray:
        x = sample("boolean", family.N, rng, k)
        parity = ((x < 0).astype(np.int64) @ inc) & 1
        return np.abs((1 - 2 * parity).sum(axis=1))

    return estimate(values, samples, seed, workers, chunk=max(1, (1 << 20) // max(len(family), 1)),
                    quantity="boolean_proj", params={"family": family.describe()})


def boolean_proj(family: SubsetFamily, samples: int = 200000, seed: int = 20240601,
                 workers: int = 1, cap: int = EXACT_CAP):
    """Exact value when N <= cap, otherwise an MCEstimate."""
    if family.N <= cap:
        return boolean_proj_exact(family, workers, cap)
    bus.log_info(f"{family.describe()}: N above {cap}, using Monte Carlo")
    return boolean_proj_mc(family, samples, seed, workers)


# Symmetric families

def krawtchouk(d: int, j: int, N: int) -> int:
    """e_d evaluated at a sign vector with j entries equal to -1."""
    return sum((-1) ** i * math.comb(j, i) * math.comb(N - j, d - i) for i in range(d + 1))


def boolean_symmetric_exact(d: int, N: int, up_to: bool = False) -> Fraction:
    """E|e_d(x)| (or E|e_0 + ... + e_d|) by summing over the number of -1 entries."""
    if d < 0 or N < 1:
        raise OutOfRange(f"need d >= 0 and N >= 1, got d={d}, N={N}")
    total = 0
    for j in range(N + 1):
        if up_to:
            value = sum(krawtchouk(e, j, N) for e in range(min(d, N) + 1))
        else:
            value = krawtchouk(d, j, N)
        total += math.comb(N, j) * abs(value)
    return Fraction(total, 1 << N)


# Limit polynomials

@dataclass(frozen=True)
class UniPoly:
    """Real polynomial c_0 + c_1 t + ... + c_d t^d."""
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs or not all(math.isfinite(c) for c in coeffs):
            raise OutOfRange("polynomial coefficients must be finite and nonempty")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else 0

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)


@lru_cache(maxsize=None)
def pd_fractions(d: int) -> tuple:
    """Exact coefficients of P_d = t^d/d! - sum_k P_{d-2k} / (k! 2^k)."""
    if d < 0:
        raise OutOfRange(f"d must be >= 0, got {d}")
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1, math.factorial(d))
    for k in range(1, d // 2 + 1):
        weight = Fraction(1, math.factorial(k) * 2 ** k)
        for i, c in enumerate(pd_fractions(d - 2 * k)):
            coeffs[i] -= weight * c
    return tuple(coeffs)


def pd_polynomial(d: int) -> UniPoly:
    if not 0 <= d <= MAX_PD_DEGREE:
        raise OutOfRange(f"P_d is supported for 0 <= d <= {MAX_PD_DEGREE}, got {d}")
    return UniPoly(tuple(float(c) for c in pd_fractions(d)))


def boolean_limit(d: int) -> float:
    """lim_N lambda(B_{=d}^N) / N^(d/2) = E|P_d(Z)|."""
    if not 1 <= d <= MAX_PD_DEGREE:
        raise OutOfRange(f"boolean_limit needs 1 <= d <= {MAX_PD_DEGREE}, got {d}")
    return gaussian_abs_moment(pd_polynomial(d))


# Coefficient counts

def _tetra(size: int, positions: Sequence[int], N: int) -> MultiIndex:
    entries = [0] * N
    for i in positions[:size]:
        entries[i] = 1
    return MultiIndex(tuple(entries))


def _cdkn_sum(alpha_t: MultiIndex, evens) -> int:
    return sum((alpha_t + alpha_e).multiplicity() for alpha_e in evens)


def cdkn_exact(d: int, k: int, N: int) -> int:
    """C_{d,k,N} = sum over alpha_E in Lambda_E(2k, N) of |[alpha_T + alpha_E]|.

    The sum does not depend on the tetrahedral alpha_T of degree d - 2k;
    two different choices are evaluated and compared.
    """
    if not 1 <= k <= d // 2:
        raise OutOfRange(f"need 1 <= k <= d/2, got d={d}, k={k}")
    if N < d:
        raise OutOfRange(f"need N >= d, got N={N}, d={d}")
    if N > CDKN_MAX_N:
        raise BudgetExceeded(f"cdkn_exact is limited to N <= {CDKN_MAX_N}, got {N}")
    evens = even_indices(2 * k, N)
    t = d - 2 * k
    first = _cdkn_sum(_tetra(t, range(N), N), evens)
    if t > 0:
        second = _cdkn_sum(_tetra(t, range(N - 1, -1, -1), N), evens)
        if second != first:
            raise InvariantViolation(
                f"C_{{{d},{k},{N}}} depends on the tetrahedral part: {first} != {second}")
    return first


def cdkn_main_term(d: int, k: int, N: int) -> int:
    """binom(N - d + 2k, k) d! / 2^k."""
    return math.comb(N - d + 2 * k, k) * math.factorial(d) // 2 ** k


def klimek_check(d: int, N: int) -> dict:
    """lambda(B_{=d}^N) <= (1 + sqrt 2)^d lambda(B_{<=d}^N) on the symmetric families."""
    homog = float(boolean_symmetric_exact(d, N))
    upto = float(boolean_symmetric_exact(d, N, up_to=True))
    bound = KLIMEK_FACTOR ** d * upto
    return {
        "d": d,
        "N": N,
        "homog": homog,
        "upto": upto,
        "bound": bound,
        "passed": homog <= bound * (1 + 1e-12),
    }


def convergence_table(d: int, Ns: Sequence[int]) -> List[dict]:
    """lambda(B_{=d}^N) / N^(d/2) for growing N against the limit value."""
    limit = boolean_limit(d)
    rows = []
    for N in Ns:
        value = float(boolean_symmetric_exact(d, N))
        rows.append({"d": d, "N": N, "value": value, "normalized": value / N ** (d / 2),
                     "limit": limit})
    return rows
