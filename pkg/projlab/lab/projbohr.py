"""Polynomial projection constants, unconditional basis constants, Bohr radii
and the catalog of named bounds."""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from projlab.errors import OutOfRange, ProjLabError
from projlab.lab.characteristics import characteristic
from projlab.lab.closedforms import kappa_constant, proj_hilbert_invariant, proj_l1_complex
from projlab.lab.indexsets import IndexKind, IndexSet, closed_count, enumerate_indices, is_b2_set
from projlab.lab.montecarlo import MCEstimate
from projlab.lab.optimize import OptimizerConfig, maximize_on_sphere
from projlab.lab.spaces import (
    INF, Family, SequenceSpace, conjugate, dual_fundamental, is_two_convex, norm
)
from projlab.shared_state import bus

MAX_HAT_DIM = 12
UNCOND_MAX_DIM = 6
UNCOND_MAX_SIZE = 20
MAX_BOHR_DEGREE = 8
BOHR_RADIUS = 1.0 / 3.0
KINDS = ("lower", "upper", "estimate", "report")

# named results a report entry may cite, besides "MC" and "oracle"
REFERENCES = frozenset({
    "Kadets-Snobar bound",
    "dual fundamental function bound",
    "Weissler hypercontractivity",
    "B2-set L4 comparison",
    "Grünbaum Bessel integral",
    "Ortega-Cerdà-Ounaïes-Seip constant",
    "unitarily invariant radial integral",
    "Lorentz growth shape",
    "two-convex Bohr radius shape",
    "homogeneous Bohr radius comparison",
    "Bohr theorem",
    "Wiener inequality",
})


# Reports

@dataclass(frozen=True)
class BoundEntry:
    label: str
    kind: str
    value: float
    provenance: str
    stderr: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OutOfRange(f"bound kind must be one of {KINDS}, got {self.kind!r}")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "value": self.value,
            "stderr": self.stderr,
            "provenance": self.provenance,
        }


@dataclass
class BoundReport:
    """Named bounds, estimates and report-only quantities for one quantity.

    ``report`` entries (unknown constants, shapes) never enter the
    consistency check.
    """
    quantity: str
    entries: List[BoundEntry] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    rel_tol: float = 1e-9
    sigmas: float = 3.0

    def add(self, label: str, kind: str, value: float, provenance: str, stderr: float = 0.0) -> None:
        self.entries.append(BoundEntry(label, kind, float(value), provenance, float(stderr)))

    def of_kind(self, kind: str) -> List[BoundEntry]:
        return [e for e in self.entries if e.kind == kind]

    def best_lower(self) -> Optional[float]:
        lowers = [e.value for e in self.of_kind("lower")]
        return max(lowers) if lowers else None

    def best_upper(self) -> Optional[float]:
        uppers = [e.value for e in self.of_kind("upper")]
        return min(uppers) if uppers else None

    def inconsistencies(self) -> List[str]:
        problems = []
        slack = lambda v: self.rel_tol * max(1.0, abs(v))
        for lo in self.of_kind("lower"):
            for up in self.of_kind("upper"):
                if lo.value > up.value + slack(up.value):
                    problems.append(f"lower '{lo.label}' {lo.value:.10g} exceeds upper "
                                    f"'{up.label}' {up.value:.10g}")
        for est in self.of_kind("estimate"):
            band = self.sigmas * est.stderr
            for lo in self.of_kind("lower"):
                if est.value + band + slack(lo.value) < lo.value:
                    problems.append(f"estimate '{est.label}' {est.value:.10g} below lower "
                                    f"'{lo.label}' {lo.value:.10g}")
            for up in self.of_kind("upper"):
                if est.value - band > up.value + slack(up.value):
                    problems.append(f"estimate '{est.label}' {est.value:.10g} above upper "
                                    f"'{up.label}' {up.value:.10g}")
        return problems

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies()

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "params": dict(self.params),
            "consistent": self.consistent,
            "inconsistencies": self.inconsistencies(),
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_text(self) -> str:
        header = ("label", "kind", "value", "stderr", "provenance")
        rows = [(e.label, e.kind, f"{e.value:.10g}", f"{e.stderr:.3g}" if e.stderr else "",
                 e.provenance) for e in self.entries]
        widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
        lines = [f"{self.quantity}  {self.params}"]
        for row in [header] + rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        lines.append("consistent" if self.consistent else
                     "INCONSISTENT: " + "; ".join(self.inconsistencies()))
        return "\n".join(lines) + "\n"


# Polynomial projection constant

@dataclass(frozen=True)
class PolyProjConst:
    """sup over B_X of sum_alpha c_X(alpha)|z^alpha|, as [lo, hi] when the
    characteristics are only known up to an interval."""
    lo: float
    hi: float
    point: tuple
    label: str

    @property
    def value(self) -> float:
        return self.hi if self.lo == self.hi else math.sqrt(self.lo * self.hi)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi


def _active(J: IndexSet) -> list:
    return sorted({i for alpha in J for i in alpha.support()})


def _monomials(z: np.ndarray, exps: np.ndarray) -> np.ndarray:
    # 0 ** 0 == 1 keeps coordinates outside a support neutral
    return np.prod(z[None, :] ** exps, axis=1)


def _weighted_sup(space: SequenceSpace, J: IndexSet, weights: np.ndarray,
                  cfg: OptimizerConfig, label: str) -> tuple:
    """sup over nonnegative z in B_X of sum_alpha w_alpha z^alpha."""
    exps = J.exponent_matrix().astype(float)
    active = _active(J)
    if not active:
        return float(weights.sum()), tuple([0.0] * space.dimension)

    def objective(z: np.ndarray) -> float:
        return float(np.log(weights @ _monomials(z, exps)))

    best = maximize_on_sphere(space, objective, active=active, config=cfg, label=label)
    return best.value, tuple(float(v) for v in best.point)


def poly_proj_const(space: SequenceSpace, J: IndexSet,
                    config: Optional[OptimizerConfig] = None) -> PolyProjConst:
    """The polynomial projection constant; an upper bound for lambda(P_J(X_n)).

    The supremum is found by multi-start ascent, so the returned value is a
    high-confidence lower estimate of that supremum.
    """
    if J.dimension != space.dimension:
        space = space.with_dimension(J.dimension)
    if space.dimension > MAX_HAT_DIM:
        raise OutOfRange(f"poly_proj_const is limited to dimension {MAX_HAT_DIM}, got {space.dimension}")
    if len(J) == 0:
        raise OutOfRange("poly_proj_const needs a nonempty index set")
    cfg = config or OptimizerConfig()
    chars = [characteristic(space, alpha, cfg) for alpha in J]
    label = f"poly_proj_const {space.describe()} |J|={len(J)}"
    hi_w = np.array([c.hi for c in chars])
    hi, point = _weighted_sup(space, J, hi_w, cfg, label)
    if all(c.is_exact for c in chars):
        return PolyProjConst(hi, hi, point, "sup of sum c_X(alpha)|z^alpha|")
    lo_w = np.array([c.lo for c in chars])
    lo, _ = _weighted_sup(space, J, lo_w, cfg, label + " (lower characteristics)")
    return PolyProjConst(min(lo, hi), hi, point,
                         "sup of sum c_X(alpha)|z^alpha| with interval characteristics")


# Unconditional basis constant

@dataclass(frozen=True)
class UncondEstimate:
    """Largest ratio found; always a lower bound for the unconditional constant."""
    value: float
    coefficients: tuple
    evaluations: int
    budget_exhausted: bool
    note: str = "lower bound only"


def rudin_shapiro(length: int) -> np.ndarray:
    """First ``length`` coefficients of a Rudin-Shapiro polynomial (all +-1)."""
    p, q = np.ones(1), np.ones(1)
    while p.size < length:
        p, q = np.concatenate([p, q]), np.concatenate([p, -q])
    return p[:length]


class _TorusSearch:
    """sup over the torus of |sum_alpha c_alpha e^{i alpha.phi}| for a fixed J.

    The character table on the phase grid is built once; each coefficient
    vector then costs one matrix-vector product plus a few BFGS refinements.
    """

    def __init__(self, exps: np.ndarray, rng: np.random.Generator, refine: int = 4):
        self.exps = exps
        self.refine = refine
        n = exps.shape[1]
        if n <= 3:
            per_axis = 64 if n <= 2 else 32
            g = np.linspace(0.0, 2 * np.pi, per_axis, endpoint=False)
            mesh = np.meshgrid(*([g] * n), indexing="ij")
            self.grid = np.stack([m.ravel() for m in mesh], axis=1)
        else:
            self.grid = 2 * np.pi * rng.random((8192, n))
        self.table = np.exp(1j * (self.grid @ exps.T))

    def sup(self, c: np.ndarray) -> tuple:
        values = np.abs(self.table @ c)
        order = np.argsort(-values, kind="stable")[:self.refine]
        exps = self.exps

        def neg_sq(phi: np.ndarray) -> tuple:
            terms = c * np.exp(1j * (exps @ phi))
            p = terms.sum()
            grad = 2.0 * np.real(np.conj(p) * (1j * terms) @ exps)
            return -float(abs(p) ** 2), -grad

        best_val, best_phi = float(values[order[0]]), self.grid[order[0]]
        for i in order:
            res = minimize(neg_sq, self.grid[i], jac=True, method="BFGS", options={"gtol": 1e-12})
            val = math.sqrt(max(-float(res.fun), 0.0))
            if val > best_val:
                best_val, best_phi = val, res.x
        return best_val, best_phi


class _ModulusSearch:
    """sup over z in B_X of |sum_alpha c_alpha z^alpha|.

    Polydisc: the maximum sits on the torus. Other lattices: alternate the
    phase search with a sphere search over the moduli.
    """

    def __init__(self, space: SequenceSpace, J: IndexSet, cfg: OptimizerConfig,
                 rng: np.random.Generator, rounds: int = 3):
        self.space = space
        self.exps = J.exponent_matrix().astype(float)
        self.active = _active(J)
        self.torus = _TorusSearch(self.exps, rng)
        self.inner = replace(cfg, restarts=max(4, cfg.restarts // 4), polish=False)
        self.rounds = rounds

    def sup(self, c: np.ndarray) -> float:
        if self.space.family is Family.LINF:
            return self.torus.sup(c)[0]
        if not self.active:
            return float(abs(c.sum()))
        exps = self.exps
        w = np.zeros(self.space.dimension)
        w[self.active] = 1.0
        w = w / norm(self.space, w)
        best = 0.0
        for _ in range(self.rounds):
            value, phi = self.torus.sup(c * _monomials(w, exps))
            best = max(best, value)
            d = c * np.exp(1j * (exps @ phi))

            def objective(z: np.ndarray) -> float:
                return float(np.log(np.abs(d @ _monomials(z, exps))))

            found = maximize_on_sphere(self.space, objective, active=self.active, config=self.inner,
                                       warm_starts=[w], strict=False, label="sup modulus")
            w = np.asarray(found.point)
            best = max(best, found.value)
        return best


def uncond_basis_lower(space: SequenceSpace, J: IndexSet,
                       config: Optional[OptimizerConfig] = None,
                       max_evaluations: Optional[int] = None) -> UncondEstimate:
    """Lower estimate of the unconditional basis constant of the monomials in P_J(X_n):
    the best ratio sup|sum |c_alpha| z^alpha| / sup|sum c_alpha z^alpha| found."""
    if J.dimension != space.dimension:
        space = space.with_dimension(J.dimension)
    if space.dimension > UNCOND_MAX_DIM or len(J) > UNCOND_MAX_SIZE:
        raise OutOfRange(f"uncond_basis_lower is limited to n <= {UNCOND_MAX_DIM} and "
                         f"|J| <= {UNCOND_MAX_SIZE}, got n={space.dimension}, |J|={len(J)}")
    if len(J) == 0:
        raise OutOfRange("uncond_basis_lower needs a nonempty index set")
    if len(J) == 1:
        return UncondEstimate(1.0, (1.0,), 0, False)
    cfg = config or OptimizerConfig()
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    size = len(J)
    polydisc = space.family is Family.LINF
    budget = max_evaluations if max_evaluations is not None else (
        4 * cfg.restarts if polydisc else max(4, cfg.restarts // 4))
    search = _ModulusSearch(space, J, cfg, rng)

    if polydisc:
        def majorant(c: np.ndarray) -> float:
            return float(np.abs(c).sum())
    else:
        outer = replace(cfg, polish=False)

        def majorant(c: np.ndarray) -> float:
            return _weighted_sup(space, J, np.abs(c), outer, "majorant")[0]

    def ratio(c: np.ndarray) -> float:
        return majorant(c) / search.sup(c)

    seeds = [np.ones(size, dtype=complex)]
    if J.dimension == 1:
        # full-length and power-of-two Rudin-Shapiro blocks
        seeds.append(rudin_shapiro(size).astype(complex))
        block = 1 << (size.bit_length() - 1)
        if block < size:
            seeds.append(np.concatenate([rudin_shapiro(block), np.zeros(size - block)]).astype(complex))
    best_ratio, best_c = 1.0, seeds[0]
    evaluations = 0
    while evaluations < budget and best_ratio < size:
        if evaluations < len(seeds):
            c = seeds[evaluations]
        elif evaluations % 2:
            c = np.exp(2j * np.pi * rng.random(size))
        else:
            c = rng.choice([-1.0, 1.0], size).astype(complex)
        value = ratio(c)
        evaluations += 1
        if value > best_ratio:
            best_ratio, best_c = value, c

    # local refinement of the best coefficients by phase perturbation
    for step in range(budget // 2):
        if best_ratio >= size:
            break
        trial = best_c * np.exp(1j * rng.normal(0.0, 0.3 / (1 + step // 8), size))
        value = ratio(trial)
        evaluations += 1
        if value > best_ratio:
            best_ratio, best_c = value, trial

    exhausted = evaluations >= budget + budget // 2
    value = min(max(best_ratio, 1.0), float(size))
    bus.log_info(f"uncond_basis_lower {space.describe()} |J|={size}: {value:.8g} "
                 f"after {evaluations} evaluations")
    return UncondEstimate(value, tuple(complex(v) for v in best_c), evaluations, exhausted)


# Bohr radii

@dataclass(frozen=True)
class BohrRadiusEstimate:
    m: int
    value: float
    chi: float
    size: int
    prediction: Optional[float] = None


def two_convex_prediction(n: int, m: int) -> float:
    """(m / (n + m))^((m-1)/(2m)); holds up to constants only."""
    return (m / (n + m)) ** ((m - 1) / (2 * m))


def bohr_radius_homog(space: SequenceSpace, J: IndexSet, m: int,
                      config: Optional[OptimizerConfig] = None) -> BohrRadiusEstimate:
    """Upper estimate chi^(-1/m) of the m-homogeneous Bohr radius K_m."""
    if m < 1:
        raise OutOfRange(f"Bohr radii need m >= 1, got {m}")
    J_m = J.homogeneous_part(m)
    if len(J_m) == 0:
        raise OutOfRange(f"index set has no members of degree {m}")
    chi = uncond_basis_lower(space, J_m, config).value
    prediction = None
    if is_two_convex(space.with_dimension(J.dimension)) and all(a.is_tetrahedral() for a in J_m):
        prediction = two_convex_prediction(J.dimension, m)
    return BohrRadiusEstimate(m, chi ** (-1.0 / m), chi, len(J_m), prediction)


def mobius_witness(a: float, terms: int = 64) -> np.ndarray:
    """First Taylor coefficients of (a - z)/(1 - a z)."""
    if not 0.0 <= a < 1.0:
        raise OutOfRange(f"the witness needs 0 <= a < 1, got {a}")
    k = np.arange(1, terms)
    return np.concatenate([[a], -(1.0 - a * a) * a ** (k - 1)])


def witness_majorant(a: float, r: float) -> float:
    """sum_k |c_k| r^k for the witness, truncated series plus its geometric tail."""
    coeffs = mobius_witness(a)
    k = np.arange(coeffs.size)
    head = math.fsum(np.abs(coeffs) * r ** k)
    K = coeffs.size
    tail = (1.0 - a * a) * a ** (K - 1) * r ** K / (1.0 - a * r)
    return head + tail


def witness_radius(a: float) -> float:
    """Largest r with majorant <= 1; exactly 1/(1 + 2a)."""
    if a == 0.0:
        return 1.0
    return brentq(lambda r: witness_majorant(a, r) - 1.0, 1e-9, 1.0 - 1e-12, xtol=1e-15)


def _blaschke_coeffs(a: float, b: float, rot: float, terms: int = 64) -> np.ndarray:
    f = mobius_witness(a, terms)
    g = mobius_witness(b, terms)
    return np.exp(1j * rot) * np.convolve(f, g)[:terms]


def wiener_check(seed: int = 20240601, count: int = 50, tol: float = 1e-9) -> dict:
    """|c_m| <= 1 - |c_0|^2 on rotated witnesses and products of two witnesses."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    worst = -math.inf
    for _ in range(count):
        a, b = rng.uniform(0.0, 0.99, 2)
        rot, eta = rng.uniform(0.0, 2 * np.pi, 2)
        for coeffs in (np.exp(1j * rot) * mobius_witness(a, 64), _blaschke_coeffs(a, b, rot)):
            coeffs = coeffs * np.exp(1j * eta * np.arange(coeffs.size))
            excess = float(np.max(np.abs(coeffs[1:])) - (1.0 - abs(coeffs[0]) ** 2))
            worst = max(worst, excess)
    return {"functions": 2 * count, "worst_excess": worst, "passed": worst <= tol}


def one_variable_witness(grid: Optional[Sequence[float]] = None, margin: float = 0.02) -> dict:
    """Witness check for K(D) = 1/3 on the Möbius family."""
    if grid is None:
        grid = np.linspace(0.05, 0.999, 200)
    radii = [witness_radius(float(a)) for a in grid]
    below = all(witness_majorant(float(a), BOHR_RADIUS) <= 1.0 + 1e-12 for a in grid)
    violated = witness_majorant(float(max(grid)), BOHR_RADIUS + margin) > 1.0
    return {
        "radius_estimate": min(radii),
        "majorant_ok_at_one_third": below,
        "violated_above": violated,
        "checked_above": BOHR_RADIUS + margin,
    }


def bohr_sandwich(space: SequenceSpace, J: IndexSet, m_max: int,
                  config: Optional[OptimizerConfig] = None) -> BoundReport:
    """[inf_m K_m / 3, inf_m K_m] for the Bohr radius K(B_X, J)."""
    if not 1 <= m_max <= MAX_BOHR_DEGREE:
        raise OutOfRange(f"m_max must lie in [1, {MAX_BOHR_DEGREE}], got {m_max}")
    report = BoundReport("bohr_radius", params={"space": space.describe(), "size": len(J),
                                                "m_max": m_max})
    estimates = []
    for m in range(1, m_max + 1):
        if len(J.homogeneous_part(m)) == 0:
            continue
        est = bohr_radius_homog(space, J, m, config)
        estimates.append(est)
        report.add(f"K_{m} estimate", "report", est.value, "oracle")
        if est.prediction is not None:
            report.add(f"K_{m} 2-convex shape", "report", est.prediction, "two-convex Bohr radius shape")
    if not estimates:
        raise OutOfRange("index set has no members of positive degree up to m_max")
    best = min(estimates, key=lambda e: e.value)
    report.params["argmin_m"] = best.m
    report.add("inf_m K_m", "upper", best.value, "homogeneous Bohr radius comparison")
    report.add("inf_m K_m / 3", "lower", best.value / 3.0, "homogeneous Bohr radius comparison")

    if J.dimension == 1:
        witness = one_variable_witness()
        report.add("Möbius witness radius", "estimate", witness["radius_estimate"], "oracle")
        report.add("Bohr radius of the disc", "report", BOHR_RADIUS, "Bohr theorem")
        wiener = wiener_check(seed=(config or OptimizerConfig()).seed)
        report.add("Wiener worst excess", "report", wiener["worst_excess"], "Wiener inequality")
        report.params["witness_ok"] = bool(witness["majorant_ok_at_one_third"] and witness["violated_above"])
        report.params["wiener_ok"] = bool(wiener["passed"])
    return report


# Bounds catalog

def _is_linear_full(J: IndexSet) -> bool:
    return J.degrees() == (1,) and len(J) == J.dimension


def _is_full_family(J: IndexSet) -> bool:
    if J.kind in (IndexKind.FULL, IndexKind.FULL_UP_TO):
        return True
    degrees = J.degrees()
    return all(len(J.homogeneous_part(k)) == closed_count(IndexKind.FULL, k, J.dimension)
               for k in degrees)


def lorentz_shape_bounds(n: int, s: float) -> dict:
    """Growth shapes of the two lower estimates for lambda(l_{2,s}^n), 1 < s < 2."""
    if not 1.0 < s < 2.0:
        raise OutOfRange(f"shape bounds need 1 < s < 2, got {s}")
    log_n = 1.0 + math.log(n)
    return {
        "from_l21": math.sqrt(n / math.log(math.e + math.log(n))) / log_n ** (1.0 - 1.0 / s),
        "from_l2": math.sqrt(n) / log_n ** (1.0 / s - 0.5),
    }


def bounds_catalog(space: SequenceSpace, J: IndexSet, mc_estimate: Optional[MCEstimate] = None,
                   config: Optional[OptimizerConfig] = None, include_hat: bool = True) -> BoundReport:
    """Every applicable named bound for lambda(P_J(X_n)) in one report."""
    if len(J) == 0:
        raise OutOfRange("bounds_catalog needs a nonempty index set")
    if J.dimension != space.dimension:
        space = space.with_dimension(J.dimension)
    n, m, size = J.dimension, J.degree, len(J)
    report = BoundReport("lambda(P_J(X_n))", params={"space": space.describe(), "n": n,
                                                     "degree": m, "size": size})
    report.add("sqrt(|J|)", "upper", math.sqrt(size), "Kadets-Snobar bound")

    if include_hat and n <= MAX_HAT_DIM:
        hat = poly_proj_const(space, J, config)
        report.add("polynomial projection constant", "upper", hat.hi, "oracle")

    if J.is_homogeneous() and m >= 1:
        try:
            report.add("e^m phi_X'(n)^m", "upper", math.e ** m * dual_fundamental(space, n) ** m,
                       "dual fundamental function bound")
        except ProjLabError as e:
            bus.log_info(f"bounds_catalog: dual fundamental function unavailable: {e}")

    if space.family is Family.LINF:
        report.add("sqrt(|J|) / sqrt(2)^m", "lower", math.sqrt(size) / math.sqrt(2.0) ** m,
                   "Weissler hypercontractivity")
        if is_b2_set(J):
            report.add("sqrt(|J|) / sqrt(2)", "lower", math.sqrt(size / 2.0),
                       "B2-set L4 comparison")
        if _is_linear_full(J):
            report.add("lambda(l_1^n(C))", "estimate", proj_l1_complex(n),
                       "Grünbaum Bessel integral")

    if m >= 1:
        report.add("kappa^m", "report", kappa_constant() ** m,
                   "Ortega-Cerdà-Ounaïes-Seip constant")

    if space.family is Family.LR and space.r == 2 and n >= 2 and _is_full_family(J):
        report.add("lambda(P_J(l_2^n))", "estimate", proj_hilbert_invariant(n, J.degrees()),
                   "unitarily invariant radial integral")

    if space.family is Family.LORENTZ and space.r == 2 and 1.0 < space.s < 2.0 and m == 1:
        for name, value in lorentz_shape_bounds(n, space.s).items():
            report.add(f"shape {name}", "report", value, "Lorentz growth shape")

    if mc_estimate is not None:
        report.add(mc_estimate.quantity or "Monte Carlo", "estimate", mc_estimate.mean, "MC",
                   mc_estimate.stderr)

    for problem in report.inconsistencies():
        bus.log_error(f"bounds_catalog: {problem}")
    return report


def conjecture_report(space: SequenceSpace, m: int, ns: Sequence[int],
                      config: Optional[OptimizerConfig] = None) -> List[dict]:
    """hat-lambda(P_m(X_n)) / |Lambda(m, n)|^(1/r') for growing n; tracked, not asserted."""
    if space.family not in (Family.LR, Family.LORENTZ):
        raise OutOfRange("conjecture_report needs an l_r or Lorentz space")
    rc = conjugate(space.r)
    rows = []
    for n in ns:
        J = enumerate_indices(IndexKind.FULL, m, n)
        hat = poly_proj_const(space.with_dimension(n), J, config)
        scale = len(J) ** (0.0 if rc == INF else 1.0 / rc)
        rows.append({"n": n, "m": m, "hat": hat.value, "size": len(J), "ratio": hat.value / scale})
    return rows
