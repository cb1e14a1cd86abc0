"""Finite-dimensional sequence lattices: norms, fundamental functions, Köthe duals."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from projlab.errors import DimensionMismatch, DualNotImplemented, OutOfRange, ParseError

INF = math.inf
NAKANO_RTOL = 1e-12


class Family(Enum):
    LR = "lr"
    LORENTZ = "lorentz"
    NAKANO = "nakano"
    NAKANO_DUAL = "nakanodual"
    MIXED = "mixed"
    LINF = "linf"


def conjugate(r: float) -> float:
    """r' with 1/r + 1/r' = 1."""
    if r == 1:
        return INF
    if r == INF:
        return 1.0
    return r / (r - 1.0)


def _fmt(v: float) -> str:
    if v == INF:
        return "inf"
    return f"{v:g}"


@dataclass(frozen=True)
class SequenceSpace:
    """A tagged finite-dimensional Banach sequence lattice (C^n, ||.||).

    Exponents live in [1, inf] with ``math.inf`` for infinity. Lorentz
    spaces use the weights w_k = k^(s/r) - (k-1)^(s/r), whose fundamental
    function is exactly k^(1/r); they are normed for s <= r or s = inf.
    """
    family: Family
    dimension: int
    r: Optional[float] = None
    s: Optional[float] = None
    exponents: tuple = ()
    p: Optional[float] = None
    q: Optional[float] = None
    rows: int = 0
    cols: int = 0

    def __post_init__(self):
        if self.dimension < 1:
            raise OutOfRange(f"dimension must be >= 1, got {self.dimension}")
        for name in ("r", "s", "p", "q"):
            v = getattr(self, name)
            if v is not None and not v >= 1:
                raise OutOfRange(f"exponent {name} must be >= 1, got {v}")
        if self.family in (Family.NAKANO, Family.NAKANO_DUAL):
            if len(self.exponents) != self.dimension:
                raise DimensionMismatch(
                    f"{len(self.exponents)} exponents for dimension {self.dimension}")
            if any(not e >= 1 for e in self.exponents):
                raise OutOfRange(f"Nakano exponents must be >= 1, got {self.exponents}")
        if self.family is Family.MIXED and self.rows * self.cols != self.dimension:
            raise DimensionMismatch(
                f"mixed space {self.rows}x{self.cols} cannot have dimension {self.dimension}")
        if self.family is Family.LORENTZ:
            if self.r == INF:
                raise OutOfRange("Lorentz spaces need finite r")
            if self.s != INF and self.s > self.r:
                raise OutOfRange(f"Lorentz(r={self.r}, s={self.s}) is not normed; need s <= r or s = inf")

    # Constructors

    @classmethod
    def lr(cls, r: float, n: int) -> "SequenceSpace":
        if r == INF:
            return cls.linf(n)
        return cls(Family.LR, n, r=float(r))

    @classmethod
    def linf(cls, n: int) -> "SequenceSpace":
        return cls(Family.LINF, n)

    @classmethod
    def lorentz(cls, r: float, s: float, n: int) -> "SequenceSpace":
        return cls(Family.LORENTZ, n, r=float(r), s=float(s))

    @classmethod
    def nakano(cls, exponents: Sequence[float]) -> "SequenceSpace":
        exps = tuple(float(e) for e in exponents)
        return cls(Family.NAKANO, len(exps), exponents=exps)

    @classmethod
    def nakano_dual(cls, exponents: Sequence[float]) -> "SequenceSpace":
        exps = tuple(float(e) for e in exponents)
        return cls(Family.NAKANO_DUAL, len(exps), exponents=exps)

    @classmethod
    def mixed(cls, p: float, q: float, rows: int, cols: int) -> "SequenceSpace":
        return cls(Family.MIXED, rows * cols, p=float(p), q=float(q), rows=rows, cols=cols)

    def with_dimension(self, n: int) -> "SequenceSpace":
        """Same family in dimension n (symmetric families only)."""
        if self.family is Family.LR:
            return SequenceSpace.lr(self.r, n)
        if self.family is Family.LINF:
            return SequenceSpace.linf(n)
        if self.family is Family.LORENTZ:
            return SequenceSpace.lorentz(self.r, self.s, n)
        if self.family is Family.NAKANO and len(set(self.exponents)) == 1:
            return SequenceSpace.nakano([self.exponents[0]] * n)
        raise OutOfRange(f"{self.describe()} has no canonical dimension change")

    def describe(self) -> str:
        if self.family is Family.LR:
            return f"lr:{_fmt(self.r)}"
        if self.family is Family.LINF:
            return "linf"
        if self.family is Family.LORENTZ:
            return f"lorentz:{_fmt(self.r)},{_fmt(self.s)}"
        if self.family in (Family.NAKANO, Family.NAKANO_DUAL):
            return f"{self.family.value}:" + ",".join(_fmt(e) for e in self.exponents)
        return f"mixed:{_fmt(self.p)},{_fmt(self.q)},{self.rows}x{self.cols}"

    def __str__(self) -> str:
        return f"{self.describe()} (n={self.dimension})"


# Norms

def _lr(x: np.ndarray, r: float) -> float:
    top = float(x.max(initial=0.0))
    if top == 0.0:
        return 0.0
    if r == INF:
        return top
    if r == 1:
        return float(math.fsum(x))
    return top * float(np.sum((x / top) ** r)) ** (1.0 / r)


def _lorentz(x: np.ndarray, r: float, s: float) -> float:
    # stable sort by modulus, descending; ties keep their original order
    xs = x[np.argsort(-x, kind="stable")]
    k = np.arange(1, len(xs) + 1, dtype=float)
    if s == INF:
        return float(np.max(np.cumsum(xs) / k ** (1.0 - 1.0 / r)))
    top = float(xs[0]) if len(xs) else 0.0
    if top == 0.0:
        return 0.0
    w = k ** (s / r) - (k - 1.0) ** (s / r)
    return top * float(np.sum((xs / top) ** s * w)) ** (1.0 / s)


def _nakano(x: np.ndarray, exps: np.ndarray) -> float:
    """Luxemburg norm inf{t : sum |x_i/t|^p_i <= 1} by bisection."""
    if not x.any():
        return 0.0
    finite = np.isfinite(exps)
    lower = float(x.max()) / len(x)
    if (~finite).any():
        lower = max(lower, float(x[~finite].max()))
    xf, pf = x[finite], exps[finite]
    live = xf > 0
    xf, pf = xf[live], pf[live]

    def excess(t: float) -> float:
        return float(np.sum((xf / t) ** pf)) - 1.0

    if len(xf) == 0 or excess(lower) <= 0.0:
        return lower
    upper = max(float(np.sum(x)), lower)
    if excess(upper) >= 0.0:
        return upper
    return float(bisect(excess, lower, upper, xtol=1e-300, rtol=NAKANO_RTOL, maxiter=400))


def _nakano_dual(y: np.ndarray, exps: np.ndarray) -> float:
    """Amemiya norm inf_k (1 + sum psi_i(k |y_i|)) / k, psi_i the Young
    conjugate of t^p_i; this is the Köthe dual of the Luxemburg norm."""
    if not y.any():
        return 0.0
    ones = exps == 1
    infs = ~np.isfinite(exps)
    mid = ~(ones | infs) & (y > 0)
    linear = float(np.sum(y[infs]))
    k_cap = INF
    if (ones & (y > 0)).any():
        k_cap = 1.0 / float(y[ones].max())

    ym, pm = y[mid], exps[mid]
    if len(ym) == 0:
        return linear + (0.0 if k_cap == INF else 1.0 / k_cap)
    qm = pm / (pm - 1.0)

    def balance(k: float) -> float:
        return float(np.sum((k * ym / pm) ** qm)) - 1.0

    k_lo = float(np.min(pm * (0.5 / len(ym)) ** (1.0 / qm) / ym))
    k_hi = float(np.max(pm / ym))
    if k_cap <= k_lo or balance(min(k_hi, k_cap)) < 0.0:
        k_star = k_cap
    else:
        k_star = float(bisect(balance, k_lo, min(k_hi, k_cap), xtol=1e-300,
                              rtol=NAKANO_RTOL, maxiter=400))
    psi = (pm - 1.0) * (k_star * ym / pm) ** qm
    return (1.0 + float(np.sum(psi))) / k_star + linear


def norm(space: SequenceSpace, z) -> float:
    """Norm of z in the space; z may be complex."""
    x = np.abs(np.asarray(z)).astype(float).ravel()
    if x.shape[0] != space.dimension:
        raise DimensionMismatch(f"vector of length {x.shape[0]} in {space}")
    if not np.all(np.isfinite(x)):
        raise OutOfRange("vector entries must be finite")
    fam = space.family
    if fam is Family.LR:
        return _lr(x, space.r)
    if fam is Family.LINF:
        return float(x.max())
    if fam is Family.LORENTZ:
        return _lorentz(x, space.r, space.s)
    if fam is Family.NAKANO:
        return _nakano(x, np.asarray(space.exponents))
    if fam is Family.NAKANO_DUAL:
        return _nakano_dual(x, np.asarray(space.exponents))
    rows = x.reshape(space.rows, space.cols)
    row_norms = np.array([_lr(row, space.q) for row in rows])
    return _lr(row_norms, space.p)


def fundamental_function(space: SequenceSpace, k: int) -> float:
    """phi_X(k) = ||e_1 + ... + e_k||."""
    if not 1 <= k <= space.dimension:
        raise OutOfRange(f"fundamental_function needs 1 <= k <= {space.dimension}, got {k}")
    if space.family is Family.LINF:
        return 1.0
    if space.family in (Family.LR, Family.LORENTZ):
        return float(k) ** (1.0 / space.r)
    ones = np.zeros(space.dimension)
    ones[:k] = 1.0
    return norm(space, ones)


def is_symmetric(space: SequenceSpace) -> bool:
    if space.family in (Family.LR, Family.LORENTZ, Family.LINF):
        return True
    if space.family in (Family.NAKANO, Family.NAKANO_DUAL):
        return len(set(space.exponents)) == 1
    return False


def is_two_convex(space: SequenceSpace) -> bool:
    fam = space.family
    if fam is Family.LINF:
        return True
    if fam is Family.LR:
        return space.r >= 2
    if fam is Family.LORENTZ:
        return space.r > 2 and space.s >= 2
    if fam is Family.NAKANO:
        return min(space.exponents) >= 2
    if fam is Family.MIXED:
        return space.p >= 2 and space.q >= 2
    return False


def kothe_dual(space: SequenceSpace) -> SequenceSpace:
    """The Köthe dual X' (conjugate exponents)."""
    fam = space.family
    if fam is Family.LR:
        return SequenceSpace.lr(conjugate(space.r), space.dimension)
    if fam is Family.LINF:
        return SequenceSpace.lr(1.0, space.dimension)
    if fam is Family.MIXED:
        return SequenceSpace.mixed(conjugate(space.p), conjugate(space.q), space.rows, space.cols)
    if fam is Family.NAKANO:
        return SequenceSpace.nakano_dual(space.exponents)
    if fam is Family.NAKANO_DUAL:
        return SequenceSpace.nakano(space.exponents)
    raise DualNotImplemented(
        f"the Köthe dual of {space.describe()} is only available through dual_fundamental")


def dual_fundamental(space: SequenceSpace, k: int) -> float:
    """phi_{X'}(k); k / phi_X(k) for symmetric lattices."""
    if space.family in (Family.LR, Family.LORENTZ, Family.LINF):
        return k / fundamental_function(space, k)
    return fundamental_function(kothe_dual(space), k)


def pointwise_product_exponent(r0: float, r1: float) -> float:
    """l_r0 . l_r1 = l_r with 1/r = 1/r0 + 1/r1."""
    inv = 1.0 / r0 + 1.0 / r1
    if inv > 1.0 + 1e-15:
        raise OutOfRange(f"l_{r0} . l_{r1} is not a Banach lattice (1/r = {inv})")
    return INF if inv == 0 else 1.0 / inv


def calderon_exponent(r0: float, r1: float, theta: float) -> float:
    """(l_r0)^(1-theta) (l_r1)^theta = l_r."""
    if not 0.0 < theta < 1.0:
        raise OutOfRange(f"theta must lie in (0, 1), got {theta}")
    inv = (1.0 - theta) / r0 + theta / r1
    return INF if inv == 0 else 1.0 / inv


def _exponent(token: str) -> float:
    token = token.strip().lower()
    if token in ("inf", "infinity", "∞"):
        return INF
    try:
        return float(token)
    except ValueError as e:
        raise ParseError(f"bad exponent {token!r}") from e


def parse_space(text: str, n: Optional[int] = None) -> SequenceSpace:
    """Parse "lr:2", "lorentz:2,1", "nakano:1.5,2,3", "mixed:1,2,4x3", "linf"."""
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    tokens = [t for t in args.split(",") if t.strip()]
    try:
        if name in ("nakano", "nakanodual"):
            exps = [_exponent(t) for t in tokens]
            if not exps:
                raise ParseError(f"{name} needs a list of exponents")
            if n is not None and len(exps) == 1:
                exps = exps * n
            return SequenceSpace.nakano(exps) if name == "nakano" else SequenceSpace.nakano_dual(exps)
        if name == "mixed":
            if len(tokens) != 3 or "x" not in tokens[2]:
                raise ParseError("mixed needs p,q,ROWSxCOLS")
            rows, cols = (int(v) for v in tokens[2].lower().split("x"))
            return SequenceSpace.mixed(_exponent(tokens[0]), _exponent(tokens[1]), rows, cols)
        if n is None:
            raise ParseError(f"space {name!r} needs a dimension (--n)")
        if name in ("linf", "l_inf"):
            return SequenceSpace.linf(n)
        if name == "lr":
            if len(tokens) != 1:
                raise ParseError("lr takes one exponent")
            return SequenceSpace.lr(_exponent(tokens[0]), n)
        if name == "lorentz":
            if len(tokens) != 2:
                raise ParseError("lorentz takes r,s")
            return SequenceSpace.lorentz(_exponent(tokens[0]), _exponent(tokens[1]), n)
    except (OutOfRange, DimensionMismatch, ValueError) as e:
        raise ParseError(f"bad space descriptor {text!r}: {e}") from e
    raise ParseError(f"unknown space family {name!r}")
