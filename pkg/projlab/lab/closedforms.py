"""Closed formulas and quadratures for projection constants."""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gammaln, j0, ndtr

from projlab.errors import OutOfRange, QuadratureError, RootIsolationError
from projlab.lab.indexsets import primes_up_to
from projlab.shared_state import bus

MAX_MOMENT_DEGREE = 20
SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    limit: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise OutOfRange(f"quadrature tolerances must be positive, got {self.abs_tol}, {self.rel_tol}")
        if self.limit < 1:
            raise OutOfRange(f"quadrature limit must be >= 1, got {self.limit}")

    @classmethod
    def from_config(cls, config: dict) -> "QuadratureConfig":
        q = config.get("quadrature", {})
        return cls(float(q.get("abs_tol", cls.abs_tol)), float(q.get("rel_tol", cls.rel_tol)),
                   int(q.get("limit", cls.limit)))


@lru_cache(maxsize=16)
def _gl_rule(order: int) -> tuple:
    """Gauss-Legendre nodes and weights on [-1, 1], cached."""
    return leggauss(order)


def _panel_sum(f, edges: np.ndarray, order: int) -> float:
    """Sum over panels [edges[i], edges[i+1]] of an order-point Gauss-Legendre rule."""
    x, w = _gl_rule(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    pts = half * x[None, :] + 0.5 * (a + b)
    panels = (f(pts) * w[None, :]).sum(axis=1) * half[:, 0]
    return math.fsum(panels)


def _adaptive_panels(f, edges: np.ndarray, rel_tol: float, abs_tol: float,
                     order: int = 16, max_order: int = 512, what: str = "integral") -> float:
    """Double the per-panel order until two successive sums agree."""
    prev = _panel_sum(f, edges, order)
    while order < max_order:
        order *= 2
        cur = _panel_sum(f, edges, order)
        if abs(cur - prev) <= max(rel_tol * abs(cur), abs_tol):
            return cur
        prev = cur
    raise QuadratureError(f"{what}: no agreement up to order {max_order}")


# Lebesgue constants

def lebesgue_constant(m: int, analytic: bool = False,
                      config: Optional[QuadratureConfig] = None) -> float:
    """L_m = (1/2pi) int |D_m|, or the analytic kernel 1 + z + ... + z^m.

    Both reduce to (1/pi) int_0^pi |sin(a t) / sin(t/2)| dt with a = m + 1/2
    (Dirichlet) or a = (m + 1)/2 (analytic); panels split at the zeros k pi / a.
    """
    if m < 0:
        raise OutOfRange(f"Lebesgue constant needs m >= 0, got {m}")
    cfg = config or QuadratureConfig()
    a = (m + 1) / 2.0 if analytic else m + 0.5
    if a == 0.5:
        return 1.0
    zeros = np.arange(1, int(math.floor(a)) + 1) * (math.pi / a)
    edges = np.unique(np.concatenate(([0.0], zeros[zeros < math.pi], [math.pi])))

    def kernel(t: np.ndarray) -> np.ndarray:
        return np.abs(np.sin(a * t) / np.sin(0.5 * t))

    value = _adaptive_panels(kernel, edges, cfg.rel_tol, cfg.abs_tol, what=f"L_{m}") / math.pi
    return value


def trig_product(degrees: Sequence[int], config: Optional[QuadratureConfig] = None) -> float:
    """Projection constant of trigonometric polynomials of multi-degree d: prod L_{d_j}."""
    if not degrees:
        raise OutOfRange("trig_product needs at least one degree")
    return math.prod(lebesgue_constant(int(d), config=config) for d in degrees)


def box_product(degrees: Sequence[int], config: Optional[QuadratureConfig] = None) -> float:
    """prod L^+_{d_j} for the analytic box {0..d_1} x ... x {0..d_n}."""
    if not degrees:
        raise OutOfRange("box_product needs at least one degree")
    return math.prod(lebesgue_constant(int(d), analytic=True, config=config) for d in degrees)


# Hilbert-space polynomials

def rw_coefficient(n: int, k: int) -> int:
    """c_k(n) = (n-1+k)! / ((n-1)! k!)."""
    return math.comb(n - 1 + k, k)


def proj_hilbert_homog(n: int, m: int) -> float:
    """Gamma(n+m) Gamma(1+m/2) / (Gamma(1+m) Gamma(n+m/2)), via log-gamma."""
    if n < 1 or m < 0:
        raise OutOfRange(f"proj_hilbert_homog needs n >= 1 and m >= 0, got n={n}, m={m}")
    if m == 0:
        return 1.0
    return math.exp(gammaln(n + m) + gammaln(1 + m / 2) - gammaln(1 + m) - gammaln(n + m / 2))


def _quad(f, a: float, b: float, epsabs: float, epsrel: float, limit: int, what: str) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, _ = quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
        except IntegrationWarning as e:
            raise QuadratureError(f"{what}: {e}") from e
    return value


def _radial_integral(n: int, ks: Sequence[int], cfg: QuadratureConfig) -> float:
    coeffs = np.zeros(ks[-1] + 1)
    for k in ks:
        coeffs[k] = float(rw_coefficient(n, k))
    poly = np.polynomial.Polynomial(coeffs)
    inner_tol = max(cfg.rel_tol, 1e-10)

    def inner(r: float) -> float:
        if r == 0.0:
            return 2 * math.pi * abs(coeffs[0])
        return _quad(lambda th: abs(poly(r * complex(math.cos(th), math.sin(th)))),
                     0.0, 2 * math.pi, cfg.abs_tol, inner_tol, cfg.limit, "inner angular integral")

    def outer(r: float) -> float:
        return inner(r) * (1.0 - r * r) ** (n - 2) * r

    return (n - 1) / math.pi * _quad(outer, 0.0, 1.0, cfg.abs_tol, max(cfg.rel_tol, 1e-9),
                                     cfg.limit, "radial integral")


def proj_hilbert_invariant(n: int, degrees: Sequence[int],
                           config: Optional[QuadratureConfig] = None) -> float:
    """Radial double integral for a unitarily invariant degree set:
    (n-1)/pi int_0^1 (int_0^2pi |sum_k c_k(n) r^k e^{ik theta}| dtheta) (1-r^2)^(n-2) r dr.
    """
    if n < 2:
        raise OutOfRange(f"proj_hilbert_invariant needs n >= 2, got {n}")
    ks = sorted(set(int(k) for k in degrees))
    if not ks or ks[0] < 0:
        raise OutOfRange(f"degrees must be a nonempty set of nonnegative integers, got {degrees}")
    if len(ks) == 1:
        # |c_k r^k e^{ik theta}| does not depend on theta
        return proj_hilbert_homog(n, ks[0])
    value = _radial_integral(n, ks, config or QuadratureConfig())
    bus.log_info(f"proj_hilbert_invariant(n={n}, degrees={ks}) = {value:.12g}")
    return value


def hilbert_invariant_lower(n: int, degrees: Sequence[int]) -> float:
    """Fejér-Riesz lower bound sum_k RW(n, k) / (k + 1)."""
    ks = sorted(set(int(k) for k in degrees))
    return math.fsum(proj_hilbert_homog(n, k) / (k + 1) for k in ks)


def hilbert_growth_report(n: int, degrees: Sequence[int]) -> dict:
    """Order-of-growth quantities for a unitarily invariant degree set.

    The upper expression holds only up to an unspecified absolute constant
    and is never used as an asserted bound.
    """
    ks = sorted(set(int(k) for k in degrees))
    top = ks[-1]
    upper = rw_coefficient(n, top) * math.log(top + 2) + math.fsum(
        abs(rw_coefficient(n, k) - rw_coefficient(n, k_next)) * math.log(k + 2)
        for k, k_next in zip(ks[:-1], ks[1:]))
    return {
        "n": n,
        "degrees": ks,
        "lower": hilbert_invariant_lower(n, ks),
        "upper_growth": float(upper),
    }


def hilbert_full_growth_report(n: int, m: int) -> dict:
    """hilbert_growth_report for all polynomials of degree <= m on l_2^n."""
    if m < 0:
        raise OutOfRange(f"degree must be >= 0, got {m}")
    return hilbert_growth_report(n, range(m + 1))


# Grünbaum values

def proj_l2(n: int, field: str = "complex") -> float:
    """Projection constant of l_2^n over the complex or real field."""
    if n < 1:
        raise OutOfRange(f"proj_l2 needs n >= 1, got {n}")
    if field == "complex":
        return math.exp(math.log(math.sqrt(math.pi) / 2) + gammaln(n + 1) - gammaln(n + 0.5))
    if field == "real":
        return math.exp(math.log(2 / math.sqrt(math.pi)) + gammaln((n + 2) / 2) - gammaln((n + 1) / 2))
    raise OutOfRange(f"field must be 'real' or 'complex', got {field!r}")


def proj_l1_real(n: int) -> float:
    """lambda(l_1^n(R)) = lambda(l_2^n(R)) for odd n, lambda(l_2^(n-1)(R)) for even n."""
    if n < 1:
        raise OutOfRange(f"proj_l1_real needs n >= 1, got {n}")
    return proj_l2(n if n % 2 else n - 1, "real")


def j0_integral(t, order: int = 128) -> np.ndarray:
    """J_0(t) = (1/pi) int_0^pi cos(t sin phi) dphi by Gauss-Legendre (small t only)."""
    x, w = _gl_rule(order)
    phi = 0.5 * math.pi * (x + 1.0)
    t = np.asarray(t, dtype=float)
    return 0.5 * (np.cos(t[..., None] * np.sin(phi)) * w).sum(axis=-1)


def proj_l1_complex(n: int, config: Optional[QuadratureConfig] = None) -> float:
    """int_0^inf (1 - J_0(t)^n) / t^2 dt.

    Integrated on pi-length panels up to T; beyond T the 1/t^2 part is exact
    (1/T) and the J_0^n part is below tol/2 by |J_0(t)| <= sqrt(2/(pi t)).
    """
    if n < 1:
        raise OutOfRange(f"proj_l1_complex needs n >= 1, got {n}")
    if n == 1:
        return 1.0
    cfg = config or QuadratureConfig()
    tol = max(cfg.rel_tol, 1e-14)
    h = n / 2.0 + 1.0
    big_t = ((2.0 / math.pi) ** (n / 2.0) / (h * tol / 2.0)) ** (1.0 / h)
    big_t = max(math.pi * math.ceil(big_t / math.pi), 4 * math.pi)
    edges = np.arange(0.0, big_t + 0.5 * math.pi, math.pi)

    def integrand(t: np.ndarray) -> np.ndarray:
        b = j0(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            one_minus = np.where(b > 0, -np.expm1(n * np.log(np.abs(b))), 1.0 - b ** n)
        return one_minus / (t * t)

    body = _adaptive_panels(integrand, edges, tol, cfg.abs_tol, order=16, what=f"l1 integral n={n}")
    return body + 1.0 / edges[-1]


# Gaussian absolute moments

def _trim(p: List[Fraction]) -> List[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _peval(p: List[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p: List[Fraction]) -> List[Fraction]:
    return _trim([k * p[k] for k in range(1, len(p))] or [Fraction(0)])


def _pdivmod(num: List[Fraction], den: List[Fraction]) -> tuple:
    num = list(num)
    quo = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        coef = num[-1] / den[-1]
        quo[shift] = coef
        for i, d in enumerate(den):
            num[shift + i] -= coef * d
        num = _trim(num[:-1] if len(num) > 1 else num)
        if len(num) < len(den):
            break
    return _trim(quo), _trim(num)


def _pgcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    while any(b):
        _, r = _pdivmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _sturm_chain(p: List[Fraction]) -> List[List[Fraction]]:
    chain = [p, _pderiv(p)]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        _, r = _pdivmod(chain[-2], chain[-1])
        if not any(r):
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    signs = [s for s in ((_peval(q, x) > 0) - (_peval(q, x) < 0) for q in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def real_roots(coeffs: Sequence[float], tol: float = 1e-12) -> List[float]:
    """Distinct real roots, ascending: exact Sturm isolation, then bisection."""
    p = _trim([Fraction(c) for c in coeffs])
    if len(p) == 1:
        return []
    sqf, _ = _pdivmod(p, _pgcd(p, _pderiv(p)))
    if len(sqf) == 1:
        return []
    chain = _sturm_chain(sqf)
    bound = 1 + max(abs(c / sqf[-1]) for c in sqf[:-1])

    isolated = []
    stack = [(-bound, bound, 0)]
    while stack:
        a, b, depth = stack.pop()
        count = _sign_changes(chain, a) - _sign_changes(chain, b)
        if count == 0:
            continue
        if count == 1:
            isolated.append((a, b))
            continue
        if depth > 200:
            raise RootIsolationError(f"could not separate roots in [{float(a)}, {float(b)}]")
        mid = (a + b) / 2
        nudge = (b - a) / 7
        while _peval(sqf, mid) == 0:
            mid += nudge
            nudge /= 3
        stack.append((mid, b, depth + 1))
        stack.append((a, mid, depth + 1))

    roots = []
    for a, b in sorted(isolated):
        if _peval(sqf, b) == 0:
            roots.append(float(b))
            continue
        fa = _peval(sqf, a)
        while b - a > tol * max(1, abs(a)):
            mid = (a + b) / 2
            fm = _peval(sqf, mid)
            if fm == 0:
                a = b = mid
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
            # keep denominators bounded
            a = Fraction(float(a))
            b = Fraction(float(b))
            fa = _peval(sqf, a)
        roots.append(float((a + b) / 2))
    return roots


def _normal_pdf(x: float) -> float:
    if math.isinf(x):
        return 0.0
    return math.exp(-0.5 * x * x) / SQRT_2PI


def _normal_mass(a: float, b: float) -> float:
    """Phi(b) - Phi(a) without cancellation in the upper tail."""
    if a >= 0:
        return float(ndtr(-a) - ndtr(-b))
    return float(ndtr(b) - ndtr(a))


def _partial_moments(a: float, b: float, degree: int) -> List[float]:
    """M_k = int_a^b t^k phi(t) dt, k = 0..degree."""
    pa, pb = _normal_pdf(a), _normal_pdf(b)
    moments = [_normal_mass(a, b)]
    if degree >= 1:
        moments.append(pa - pb)
    for k in range(2, degree + 1):
        ta = 0.0 if math.isinf(a) else a ** (k - 1) * pa
        tb = 0.0 if math.isinf(b) else b ** (k - 1) * pb
        moments.append(ta - tb + (k - 1) * moments[k - 2])
    return moments


def gaussian_abs_moment(poly) -> float:
    """E|p(Z)| for a standard normal Z; coefficients ascending (or ``.coeffs``)."""
    coeffs = [float(c) for c in getattr(poly, "coeffs", poly)]
    if not all(math.isfinite(c) for c in coeffs):
        raise RootIsolationError("polynomial coefficients must be finite")
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree > MAX_MOMENT_DEGREE:
        raise OutOfRange(f"gaussian_abs_moment supports degree <= {MAX_MOMENT_DEGREE}, got {degree}")
    if degree <= 0:
        return abs(coeffs[0]) if coeffs else 0.0

    points = [-math.inf] + real_roots(coeffs) + [math.inf]
    pieces = []
    for a, b in zip(points[:-1], points[1:]):
        moments = _partial_moments(a, b, degree)
        pieces.append(abs(math.fsum(c * mk for c, mk in zip(coeffs, moments))))
    return math.fsum(pieces)


def kappa_constant(prime_limit: int = 1_000_000) -> float:
    """(prod_p sinc(pi/p))^(-1) over all primes, with a tail estimate."""
    primes = np.asarray(primes_up_to(prime_limit), dtype=float)
    log_kappa = -math.fsum(np.log(np.sinc(1.0 / primes)))
    # log sinc(x) ~ -x^2/6 and sum_{p > P} p^-2 ~ 1/(P log P)
    log_kappa += (math.pi ** 2 / 6.0) / (prime_limit * math.log(prime_limit))
    return math.exp(log_kappa)
