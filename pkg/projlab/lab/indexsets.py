"""Multi-indices, index-set families and the prime bijection n = p^alpha."""

import bisect
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, combinations_with_replacement
from threading import Lock
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from projlab.errors import (
    DimensionMismatch, EnumerationTooLarge, MixedDegrees, OutOfRange, ParseError
)
from projlab.shared_state import bus

DEFAULT_CAP = 10_000_000


@dataclass(frozen=True)
class MultiIndex:
    """A tuple alpha of nonnegative integers with cached degree |alpha|."""
    entries: tuple
    degree: int = field(init=False, compare=False)

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if len(entries) < 1:
            raise OutOfRange("a multi-index needs at least one entry")
        if any(a < 0 for a in entries):
            raise OutOfRange(f"multi-index entries must be >= 0, got {entries}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "degree", sum(entries))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, k: int, n: int) -> "MultiIndex":
        entries = [0] * n
        entries[k] = 1
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if len(self) != len(other):
            raise DimensionMismatch(f"cannot add multi-indices of length {len(self)} and {len(other)}")
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def support(self) -> tuple:
        return tuple(i for i, a in enumerate(self.entries) if a)

    def sparse(self) -> tuple:
        """(positions, exponents) of the nonzero entries."""
        pos = self.support()
        return pos, tuple(self.entries[i] for i in pos)

    def factorial(self) -> int:
        """alpha! = prod alpha_i!"""
        return math.prod(math.factorial(a) for a in self.entries)

    def multiplicity(self) -> int:
        """|[alpha]| = |alpha|! / alpha!, exact."""
        return math.factorial(self.degree) // self.factorial()

    def log_alpha_alpha(self) -> float:
        """log(alpha^alpha) with 0^0 = 1."""
        return math.fsum(a * math.log(a) for a in self.entries if a)

    def decreasing(self) -> tuple:
        """Decreasing rearrangement alpha*."""
        return tuple(sorted(self.entries, reverse=True))

    def is_tetrahedral(self) -> bool:
        return all(a <= 1 for a in self.entries)

    def is_even(self) -> bool:
        return all(a % 2 == 0 for a in self.entries)

    def power(self, z: Sequence[complex]) -> complex:
        """z^alpha."""
        if len(z) != len(self.entries):
            raise DimensionMismatch(f"point has length {len(z)}, multi-index {len(self.entries)}")
        out = 1
        for zi, a in zip(z, self.entries):
            if a:
                out *= zi ** a
        return out

    def colex_key(self) -> tuple:
        return tuple(reversed(self.entries))


class IndexKind(Enum):
    FULL = "full"
    FULL_UP_TO = "fullupto"
    TETRAHEDRAL = "tetra"
    TETRAHEDRAL_UP_TO = "tetraupto"
    PRIME_GENERATED = "prime"
    PRIME_HOMOG = "primehomog"
    CUSTOM = "custom"


@dataclass(frozen=True)
class IndexSet:
    """A finite set of multi-indices of one dimension, in canonical order."""
    dimension: int
    members: tuple
    kind: IndexKind = IndexKind.CUSTOM
    params: tuple = ()
    _lookup: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise OutOfRange(f"dimension must be >= 1, got {self.dimension}")
        for alpha in self.members:
            if len(alpha) != self.dimension:
                raise DimensionMismatch(
                    f"member {alpha.entries} does not have dimension {self.dimension}")
        unique = set(self.members)
        if self.kind in (IndexKind.PRIME_GENERATED, IndexKind.PRIME_HOMOG):
            ordered = tuple(sorted(unique, key=prime_unmap))
        else:
            ordered = tuple(sorted(unique, key=MultiIndex.colex_key))
        object.__setattr__(self, "members", ordered)
        object.__setattr__(self, "_lookup", frozenset(ordered))

    @classmethod
    def custom(cls, members: Iterable, dimension: Optional[int] = None) -> "IndexSet":
        alphas = [m if isinstance(m, MultiIndex) else MultiIndex(tuple(m)) for m in members]
        if dimension is None:
            if not alphas:
                raise OutOfRange("cannot infer the dimension of an empty index set")
            dimension = len(alphas[0])
        return cls(dimension, tuple(alphas), IndexKind.CUSTOM, ())

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.members)

    def __contains__(self, alpha) -> bool:
        return alpha in self._lookup

    def degrees(self) -> tuple:
        return tuple(sorted({a.degree for a in self.members}))

    @property
    def degree(self) -> int:
        """Largest degree among the members."""
        return max((a.degree for a in self.members), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, m: int) -> "IndexSet":
        """J_m = members of degree exactly m."""
        top = self.params[0] if self.params else -1
        if (self.kind is IndexKind.FULL_UP_TO and m <= top) or (self.kind is IndexKind.FULL and m == top):
            kind, params = IndexKind.FULL, (m,)
        elif ((self.kind is IndexKind.TETRAHEDRAL_UP_TO and m <= top)
              or (self.kind is IndexKind.TETRAHEDRAL and m == top)):
            kind, params = IndexKind.TETRAHEDRAL, (m,)
        else:
            kind, params = IndexKind.CUSTOM, ()
        return IndexSet(self.dimension, tuple(a for a in self.members if a.degree == m), kind, params)

    def tetrahedral_part(self) -> "IndexSet":
        return IndexSet(self.dimension, tuple(a for a in self.members if a.is_tetrahedral()))

    def union(self, other: "IndexSet") -> "IndexSet":
        if other.dimension != self.dimension:
            raise DimensionMismatch(f"dimensions {self.dimension} and {other.dimension}")
        return IndexSet(self.dimension, self.members + other.members)

    def issubset(self, other: "IndexSet") -> bool:
        return set(self.members) <= set(other.members)

    def exponent_matrix(self) -> np.ndarray:
        """|J| x n integer matrix of exponents."""
        if not self.members:
            return np.zeros((0, self.dimension), dtype=np.int64)
        return np.array([a.entries for a in self.members], dtype=np.int64)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "kind": self.kind.value,
            "params": list(self.params),
            "members": [list(a.entries) for a in self.members],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IndexSet":
        try:
            kind = IndexKind(data.get("kind", "custom"))
            members = tuple(MultiIndex(tuple(m)) for m in data["members"])
            return cls(int(data["dimension"]), members, kind, tuple(data.get("params", ())))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"not an index-set object: {e}") from e


# Primes

class _PrimeSieve:
    """Process-wide incremental sieve of Eratosthenes."""

    def __init__(self):
        self._lock = Lock()
        self._limit = 1
        self._primes: list = []

    def _extend(self, limit: int) -> None:
        limit = max(limit, 2 * self._limit, 1024)
        flags = np.ones(limit + 1, dtype=bool)
        flags[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if flags[p]:
                flags[p * p::p] = False
        self._primes = np.flatnonzero(flags).tolist()
        self._limit = limit

    def primes_up_to(self, x: float) -> list:
        x = int(math.floor(x))
        with self._lock:
            if x > self._limit:
                self._extend(x)
            return self._primes[:bisect.bisect_right(self._primes, x)]

    def first(self, count: int) -> list:
        with self._lock:
            while len(self._primes) < count:
                # p_k < k (log k + log log k) for k >= 6
                k = max(count, 6)
                self._extend(int(k * (math.log(k) + math.log(math.log(k)))) + 10)
            return self._primes[:count]


_sieve = _PrimeSieve()


def primes_up_to(x: float) -> list:
    return _sieve.primes_up_to(x)


def first_primes(count: int) -> list:
    return _sieve.first(count)


def prime_pi(x: float) -> int:
    return len(primes_up_to(x))


def prime_map(n: int, dimension: Optional[int] = None) -> MultiIndex:
    """alpha with p^alpha = n over the primes in increasing order."""
    if n < 1:
        raise OutOfRange(f"prime_map needs n >= 1, got {n}")
    exponents: dict = {}
    rest = n
    for p in primes_up_to(math.isqrt(n)):
        while rest % p == 0:
            exponents[p] = exponents.get(p, 0) + 1
            rest //= p
        if p * p > rest:
            break
    if rest > 1:
        exponents[rest] = exponents.get(rest, 0) + 1

    largest = max(exponents, default=1)
    needed = prime_pi(largest) if exponents else 1
    size = needed if dimension is None else dimension
    if size < needed:
        raise DimensionMismatch(f"{n} needs {needed} primes, dimension is {dimension}")
    entries = [0] * max(size, 1)
    if exponents:
        primes = primes_up_to(largest)
        for p, e in exponents.items():
            entries[bisect.bisect_left(primes, p)] = e
    return MultiIndex(tuple(entries))


def prime_unmap(alpha: MultiIndex) -> int:
    """p^alpha, exact."""
    primes = first_primes(len(alpha))
    return math.prod(p ** a for p, a in zip(primes, alpha.entries) if a)


def omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return prime_map(n).degree


# Enumeration

def _check_cap(what: str, count: int, cap: int) -> None:
    if count > cap:
        raise EnumerationTooLarge(what, count, cap)


def _from_positions(positions: Iterable[tuple], n: int) -> Iterator[MultiIndex]:
    for combo in positions:
        entries = [0] * n
        for i in combo:
            entries[i] += 1
        yield MultiIndex(tuple(entries))


def closed_count(kind: IndexKind, m: int = 0, n: int = 1, x: float = 0) -> int:
    """Cardinality of a family without enumerating it."""
    if kind is IndexKind.FULL:
        return math.comb(n + m - 1, m)
    if kind is IndexKind.FULL_UP_TO:
        return math.comb(n + m, m)
    if kind is IndexKind.TETRAHEDRAL:
        return math.comb(n, m)
    if kind is IndexKind.TETRAHEDRAL_UP_TO:
        return sum(math.comb(n, k) for k in range(min(m, n) + 1))
    if kind in (IndexKind.PRIME_GENERATED, IndexKind.PRIME_HOMOG):
        # exact for PRIME_GENERATED, an upper bound for PRIME_HOMOG
        return int(math.floor(x))
    raise OutOfRange(f"no closed count for kind {kind.value}")


def enumerate_indices(kind: IndexKind, m: int = 0, n: int = 1,
                      x: Optional[float] = None, cap: int = DEFAULT_CAP) -> IndexSet:
    """Enumerate one of the standard index-set families exactly."""
    if kind in (IndexKind.PRIME_GENERATED, IndexKind.PRIME_HOMOG):
        if x is None or x < 1:
            raise OutOfRange(f"prime-generated sets need x >= 1, got {x}")
        if kind is IndexKind.PRIME_HOMOG and m < 0:
            raise OutOfRange(f"degree must be >= 0, got {m}")
        count = closed_count(kind, x=x)
        _check_cap(f"{kind.value}({x})", count, cap)
        dim = max(prime_pi(x), 1)
        members = []
        for k in range(1, int(math.floor(x)) + 1):
            alpha = prime_map(k, dim)
            if kind is IndexKind.PRIME_GENERATED or alpha.degree == m:
                members.append(alpha)
        params = (x,) if kind is IndexKind.PRIME_GENERATED else (x, m)
        bus.log_info(f"enumerated {kind.value}{params}: {len(members)} members in dimension {dim}")
        return IndexSet(dim, tuple(members), kind, params)

    if m < 0 or n < 1:
        raise OutOfRange(f"need m >= 0 and n >= 1, got m={m}, n={n}")
    if kind is IndexKind.CUSTOM:
        raise OutOfRange("custom index sets are built with IndexSet.custom")

    count = closed_count(kind, m, n)
    _check_cap(f"{kind.value}(m={m}, n={n})", count, cap)

    if kind is IndexKind.FULL:
        members = list(_from_positions(combinations_with_replacement(range(n), m), n))
    elif kind is IndexKind.FULL_UP_TO:
        members = [a for k in range(m + 1)
                   for a in _from_positions(combinations_with_replacement(range(n), k), n)]
    elif kind is IndexKind.TETRAHEDRAL:
        members = list(_from_positions(combinations(range(n), m), n))
    else:
        members = [a for k in range(min(m, n) + 1)
                   for a in _from_positions(combinations(range(n), k), n)]
    return IndexSet(n, tuple(members), kind, (m,))


def multiplicity(alpha: MultiIndex) -> int:
    return alpha.multiplicity()


def reduced_set(J: IndexSet) -> IndexSet:
    """J-flat: all alpha of degree m-1 with alpha + e_k in J for some k."""
    degrees = J.degrees()
    if len(degrees) != 1:
        raise MixedDegrees(f"reduced_set needs a homogeneous index set, got degrees {degrees}")
    m = degrees[0]
    if m < 1:
        raise MixedDegrees("reduced_set needs degree >= 1")
    reduced = set()
    for alpha in J:
        for k in alpha.support():
            entries = list(alpha.entries)
            entries[k] -= 1
            reduced.add(MultiIndex(tuple(entries)))
    if J.kind is IndexKind.FULL:
        kind, params = IndexKind.FULL, (m - 1,)
    elif J.kind is IndexKind.TETRAHEDRAL:
        kind, params = IndexKind.TETRAHEDRAL, (m - 1,)
    else:
        kind, params = IndexKind.CUSTOM, ()
    return IndexSet(J.dimension, tuple(reduced), kind, params)


def tetra_even_decompose(alpha: MultiIndex) -> tuple:
    """alpha = alpha_T + alpha_E, alpha_T the parity pattern."""
    tetra = MultiIndex(tuple(a % 2 for a in alpha.entries))
    even = MultiIndex(tuple(a - a % 2 for a in alpha.entries))
    return tetra, even


def even_indices(degree: int, n: int, cap: int = DEFAULT_CAP) -> IndexSet:
    """Lambda_E(degree, n): indices with all entries even."""
    if degree % 2:
        return IndexSet(n, ())
    half = enumerate_indices(IndexKind.FULL, degree // 2, n, cap=cap)
    return IndexSet(n, tuple(MultiIndex(tuple(2 * a for a in h.entries)) for h in half))


def is_b2_set(J: IndexSet) -> bool:
    """True when all sums alpha + beta (unordered pairs, repeats allowed) differ."""
    seen = set()
    members = J.members
    for i, a in enumerate(members):
        for b in members[i:]:
            s = (a + b).entries
            if s in seen:
                return False
            seen.add(s)
    return True


_KIND_ALIASES = {
    "full": IndexKind.FULL,
    "fullupto": IndexKind.FULL_UP_TO,
    "upto": IndexKind.FULL_UP_TO,
    "tetra": IndexKind.TETRAHEDRAL,
    "tetraupto": IndexKind.TETRAHEDRAL_UP_TO,
    "prime": IndexKind.PRIME_GENERATED,
    "primehomog": IndexKind.PRIME_HOMOG,
}


def parse_index_set(text: str, n: Optional[int] = None, cap: int = DEFAULT_CAP) -> IndexSet:
    """Parse "full:m", "fullupto:m", "tetra:m", "tetraupto:m", "prime:x",
    "primehomog:x,m" (dimension from ``n``) or a JSON list of exponent lists."""
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad index-set JSON: {e}") from e
        if isinstance(data, dict):
            return IndexSet.from_dict(data)
        try:
            J = IndexSet.custom([tuple(int(v) for v in row) for row in data], n)
        except (TypeError, ValueError) as e:
            raise ParseError(f"index-set JSON must be a list of integer lists: {e}") from e
        return J

    name, _, args = text.partition(":")
    kind = _KIND_ALIASES.get(name.strip().lower())
    if kind is None:
        raise ParseError(f"unknown index-set kind {name!r}")
    try:
        values = [float(v) for v in args.split(",") if v.strip()]
    except ValueError as e:
        raise ParseError(f"bad index-set parameters {args!r}") from e

    if kind is IndexKind.PRIME_GENERATED:
        if len(values) != 1:
            raise ParseError("prime:x takes one parameter")
        return enumerate_indices(kind, x=values[0], cap=cap)
    if kind is IndexKind.PRIME_HOMOG:
        if len(values) != 2:
            raise ParseError("primehomog:x,m takes two parameters")
        return enumerate_indices(kind, m=int(values[1]), x=values[0], cap=cap)
    if len(values) != 1 or values[0] != int(values[0]):
        raise ParseError(f"{name}:m takes one integer degree")
    if n is None:
        raise ParseError(f"{name}:m needs the dimension (--n)")
    return enumerate_indices(kind, int(values[0]), n, cap=cap)
