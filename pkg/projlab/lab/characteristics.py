"""The characteristic c_X(alpha) = 1 / sup_{z in B_X} |z^alpha|."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from projlab.errors import DimensionMismatch, NoClosedForm, OutOfRange
from projlab.lab.indexsets import MultiIndex
from projlab.lab.optimize import OptimizerConfig, maximize_on_sphere
from projlab.lab.spaces import INF, Family, SequenceSpace, conjugate, kothe_dual

BRUTEFORCE_MAX_DIM = 12


class Provenance(Enum):
    CLOSED_FORM = "closed-form"
    BOUNDS = "bounds"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class Characteristic:
    """c_X(alpha), exact (lo == hi) or as an interval, stored as logs."""
    log_lo: float
    log_hi: float
    provenance: Provenance
    space: SequenceSpace
    alpha: MultiIndex
    label: str = ""

    def __post_init__(self):
        if self.log_lo > self.log_hi + 1e-12 * max(1.0, abs(self.log_hi)):
            raise OutOfRange(f"characteristic interval is empty: [{self.log_lo}, {self.log_hi}]")

    @property
    def lo(self) -> float:
        return math.exp(self.log_lo)

    @property
    def hi(self) -> float:
        return math.exp(self.log_hi)

    @property
    def value(self) -> float:
        """The exact value, or the geometric midpoint of an interval."""
        return math.exp(0.5 * (self.log_lo + self.log_hi))

    @property
    def is_exact(self) -> bool:
        return self.log_lo == self.log_hi

    def contains(self, value: float, rel_tol: float = 0.0) -> bool:
        return self.lo * (1 - rel_tol) <= value <= self.hi * (1 + rel_tol)

    def to_dict(self) -> dict:
        return {
            "space": self.space.describe(),
            "alpha": list(self.alpha.entries),
            "lo": self.lo,
            "hi": self.hi,
            "provenance": self.provenance.value,
            "label": self.label,
        }


def log_ell1_characteristic(alpha: MultiIndex) -> float:
    """log(m^m / alpha^alpha), the l_1 characteristic and the duality product."""
    m = alpha.degree
    return (m * math.log(m) if m else 0.0) - alpha.log_alpha_alpha()


def _xlogx(values) -> float:
    return math.fsum(v * math.log(v) for v in values if v > 0)


def _check_dims(space: SequenceSpace, alpha: MultiIndex) -> None:
    if len(alpha) != space.dimension:
        raise DimensionMismatch(f"alpha of length {len(alpha)} in {space}")


def _exact(log_c: float, space, alpha, label: str) -> Characteristic:
    return Characteristic(log_c, log_c, Provenance.CLOSED_FORM, space, alpha, label)


def _log_nakano(exponents, alpha: MultiIndex) -> float:
    beta = [a / p for a, p in zip(alpha.entries, exponents) if a and p != INF]
    big_b = math.fsum(beta)
    return _xlogx([big_b]) - _xlogx(beta)


def characteristic_closed(space: SequenceSpace, alpha: MultiIndex) -> Characteristic:
    """Closed formula (exact or interval) for the families that have one."""
    _check_dims(space, alpha)
    m = alpha.degree
    fam = space.family
    if m == 0 or fam is Family.LINF:
        return _exact(0.0, space, alpha, "trivial: sup attained at (1,...,1)")

    l1 = log_ell1_characteristic(alpha)
    if fam is Family.LR:
        return _exact(l1 / space.r, space, alpha, "Dineen formula (m^m/alpha^alpha)^(1/r)")
    if fam is Family.NAKANO:
        return _exact(_log_nakano(space.exponents, alpha), space, alpha,
                      "Nakano formula prod (alpha_i/p_i)^(alpha_i/p_i)")
    if fam is Family.NAKANO_DUAL:
        return _exact(l1 - _log_nakano(space.exponents, alpha), space, alpha,
                      "duality identity c_X c_X' = m^m/alpha^alpha with the Nakano formula")
    if fam is Family.MIXED:
        a = np.asarray(alpha.entries, dtype=float).reshape(space.rows, space.cols)
        row_sums = a.sum(axis=1)
        inv_p = 0.0 if space.p == INF else 1.0 / space.p
        inv_q = 0.0 if space.q == INF else 1.0 / space.q
        log_c = (inv_p * m * math.log(m) - inv_q * _xlogx(a.ravel())
                 + (inv_q - inv_p) * _xlogx(row_sums))
        return _exact(log_c, space, alpha, "mixed-norm product formula")

    # Lorentz
    r, s = space.r, space.s
    if alpha.is_tetrahedral():
        return _exact(m * math.log(m) / r, space, alpha, "tetrahedral: phi_X(m)^m")
    if s == r:
        return _exact(l1 / r, space, alpha, "Lorentz l_{r,r} = l_r: Dineen formula")
    star = alpha.decreasing()
    if s == INF:
        log_p = math.fsum(a * math.log(k) / r for k, a in enumerate(star, start=1) if a)
        return Characteristic(log_p, log_p + m * math.log(conjugate(r)), Provenance.BOUNDS,
                              space, alpha, "Marcinkiewicz bounds prod k^(alpha*_k/r)")
    if s == 1:
        rc = conjugate(r)
        log_q = 0.0 if rc == INF else -math.fsum(a * math.log(k) / rc for k, a in enumerate(star, start=1) if a)
        hi = l1 + log_q
        return Characteristic(hi - m * math.log(r), hi, Provenance.BOUNDS, space, alpha,
                              "Lorentz l_{r,1} bounds (m^m/alpha^alpha) prod k^(-alpha*_k/r')")
    raise NoClosedForm(f"no closed form for {space.describe()} at alpha={alpha.entries}; use brute force")


def characteristic_bruteforce(space: SequenceSpace, alpha: MultiIndex,
                              config: Optional[OptimizerConfig] = None) -> Characteristic:
    """Independent oracle: maximize sum alpha_i log z_i on the nonnegative sphere.

    Coordinates with alpha_i = 0 are frozen at zero. The result is a
    high-confidence heuristic, never a certified value.
    """
    _check_dims(space, alpha)
    if space.dimension > BRUTEFORCE_MAX_DIM:
        raise OutOfRange(f"brute force is limited to dimension {BRUTEFORCE_MAX_DIM}, got {space.dimension}")
    if alpha.degree == 0:
        return Characteristic(0.0, 0.0, Provenance.BRUTE_FORCE, space, alpha, "oracle: alpha = 0")

    pos, exps = alpha.sparse()
    weights = np.asarray(exps, dtype=float)
    idx = np.asarray(pos, dtype=int)

    def objective(z: np.ndarray) -> float:
        return float(weights @ np.log(z[idx]))

    warm = []
    if space.family is Family.LR:
        w = np.zeros(space.dimension)
        w[idx] = (weights / alpha.degree) ** (1.0 / space.r)
        warm.append(w)

    best = maximize_on_sphere(space, objective, active=pos, config=config, warm_starts=warm,
                              label=f"characteristic {space.describe()} {alpha.entries}")
    log_c = -best.log_value
    return Characteristic(log_c, log_c, Provenance.BRUTE_FORCE, space, alpha,
                          "oracle: multi-start projected gradient on the unit sphere")


def characteristic(space: SequenceSpace, alpha: MultiIndex,
                   config: Optional[OptimizerConfig] = None) -> Characteristic:
    """Closed form when one exists, brute force otherwise."""
    try:
        return characteristic_closed(space, alpha)
    except NoClosedForm:
        return characteristic_bruteforce(space, alpha, config)


def duality_defect(space: SequenceSpace, alpha: MultiIndex, method: str = "closed",
                   config: Optional[OptimizerConfig] = None) -> float:
    """|c_X(alpha) c_X'(alpha) - m^m/alpha^alpha| / (m^m/alpha^alpha)."""
    dual = kothe_dual(space)
    if method == "closed":
        cx, cd = characteristic_closed(space, alpha), characteristic_closed(dual, alpha)
    elif method == "bruteforce":
        cx = characteristic_bruteforce(space, alpha, config)
        cd = characteristic_bruteforce(dual, alpha, config)
    else:
        raise OutOfRange(f"unknown method {method!r}")
    if not (cx.is_exact and cd.is_exact):
        raise NoClosedForm("duality defect needs exact characteristics on both sides")
    return abs(math.expm1(cx.log_lo + cd.log_lo - log_ell1_characteristic(alpha)))


def characteristic_combine(op: str, cx: Characteristic, cy: Characteristic,
                           theta: Optional[float] = None) -> Characteristic:
    """Pointwise product (op="product") or Calderón interpolation (op="interpolate")."""
    if cx.alpha != cy.alpha:
        raise OutOfRange(f"mismatched alpha: {cx.alpha.entries} vs {cy.alpha.entries}")
    if cx.space.dimension != cy.space.dimension:
        raise DimensionMismatch("characteristics live in different dimensions")
    prov = Provenance.CLOSED_FORM if cx.is_exact and cy.is_exact else Provenance.BOUNDS
    if op == "product":
        return Characteristic(cx.log_lo + cy.log_lo, cx.log_hi + cy.log_hi, prov, cx.space,
                              cx.alpha, "product lattice: c_X c_Y")
    if op == "interpolate":
        if theta is None or not 0.0 < theta < 1.0:
            raise OutOfRange(f"interpolation needs 0 < theta < 1, got {theta}")
        return Characteristic((1 - theta) * cx.log_lo + theta * cy.log_lo,
                              (1 - theta) * cx.log_hi + theta * cy.log_hi, prov, cx.space,
                              cx.alpha, f"Calderón product: c_X^(1-theta) c_Y^theta, theta={theta:g}")
    raise OutOfRange(f"unknown combine op {op!r}")
