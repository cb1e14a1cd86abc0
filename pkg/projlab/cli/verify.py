"""Verification suites: named numeric cross-checks with pass/fail outcomes.

Each check returns a CheckOutcome. Outcomes carry no timings so a run is
byte-identical for a fixed seed and worker count.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Tuple

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from projlab.cli.output import ResultRow, render_csv, render_json
from projlab.cli.parsing import RunConfig
from projlab.errors import ProjLabError
from projlab.lab import boolean, closedforms, montecarlo, projbohr
from projlab.lab.characteristics import (
    characteristic_bruteforce, characteristic_closed, duality_defect
)
from projlab.lab.closedforms import QuadratureConfig
from projlab.lab.indexsets import IndexKind, IndexSet, enumerate_indices
from projlab.lab.optimize import OptimizerConfig
from projlab.lab.spaces import SequenceSpace, conjugate, dual_fundamental
from projlab.shared_state import CheckOutcome, RunState, bus

SIGMAS = 3.0
SQRT_PI_HALF = math.sqrt(math.pi) / 2.0


@dataclass(frozen=True)
class VerifyContext:
    """Sizes and seeds shared by every check of one suite run."""
    suite: str
    seed: int
    workers: int
    opt: OptimizerConfig
    quad: QuadratureConfig

    @property
    def full(self) -> bool:
        return self.suite == "full"

    def samples(self, core: int, full: int = 1_000_000) -> int:
        return full if self.full else core


def _within(estimate: montecarlo.MCEstimate, target: float, sigmas: float = SIGMAS,
            floor: float = 1e-12) -> bool:
    return abs(estimate.mean - target) <= sigmas * estimate.stderr + floor


def _outcome(name: str, provenance: str, passed: bool, detail: str = "", **values) -> CheckOutcome:
    return CheckOutcome(name, provenance, bool(passed), detail, values)


# Monte Carlo cross-checks

def check_rw_sphere(ctx: VerifyContext) -> CheckOutcome:
    est = montecarlo.sphere_invariant(2, [2], ctx.samples(200_000), ctx.seed, ctx.workers)
    exact = closedforms.proj_hilbert_homog(2, 2)
    return _outcome("rw-sphere", "Ryll-Wojtaszczyk gamma ratio", _within(est, exact),
                    f"{est.mean:.6f} +- {est.stderr:.2e} vs {exact}",
                    estimate=est.mean, stderr=est.stderr, exact=exact)


def check_l1_complex(ctx: VerifyContext) -> CheckOutcome:
    loose = replace(ctx.quad, abs_tol=1e-10, rel_tol=1e-9)
    values, ok, worst_gap = {}, True, 0.0
    for n in (2, 4, 8):
        J = enumerate_indices(IndexKind.FULL, 1, n)
        est = montecarlo.torus_exp_sum(J, ctx.samples(100_000), ctx.seed, ctx.workers)
        quad = closedforms.proj_l1_complex(n, ctx.quad)
        gap = abs(quad - closedforms.proj_l1_complex(n, loose))
        worst_gap = max(worst_gap, gap)
        ok &= _within(est, quad) and gap <= 1e-8
        values[f"n{n}"] = {"estimate": est.mean, "stderr": est.stderr, "quadrature": quad}
    return _outcome("l1-complex", "Grünbaum Bessel integral", ok,
                    f"quadrature self-consistency {worst_gap:.1e}", **values)


def check_trace_class(ctx: VerifyContext) -> CheckOutcome:
    rows = []
    for n in (2, 4, 8, 16):
        est = montecarlo.trace_class(n, ctx.samples(100_000), ctx.seed, ctx.workers).scaled(1.0 / n)
        rows.append((n, est.mean, est.stderr))
    monotone = all(b[1] >= a[1] - SIGMAS * math.hypot(a[2], b[2]) for a, b in zip(rows, rows[1:]))
    below = all(mean <= SQRT_PI_HALF + SIGMAS * se for _, mean, se in rows)
    close = abs(rows[-1][1] - SQRT_PI_HALF) <= 0.02
    return _outcome("trace-class", "trace-class projection limit", monotone and below and close,
                    f"value(16)/16 = {rows[-1][1]:.4f}",
                    **{f"n{n}": {"mean": mean, "stderr": se} for n, mean, se in rows})


def check_dirichlet(ctx: VerifyContext) -> CheckOutcome:
    samples = ctx.samples(100_000)
    quad_value = integrate.quad(lambda t: abs(2.0 * math.cos(t / 2.0)), 0.0, 2.0 * math.pi)[0] / (2.0 * math.pi)
    two = montecarlo.dirichlet_projection(2.0, samples=samples, seed=ctx.seed, workers=ctx.workers)
    linear = montecarlo.dirichlet_projection(30.0, m=1, samples=samples, seed=ctx.seed, workers=ctx.workers)
    l1_10 = closedforms.proj_l1_complex(10, ctx.quad)
    xs = (10.0, 30.0, 100.0) if ctx.full else (10.0, 30.0)
    capped = [montecarlo.dirichlet_projection(x, samples=samples // 4, seed=ctx.seed, workers=ctx.workers)
              for x in xs]
    ok = (_within(two, quad_value) and abs(quad_value - 4.0 / math.pi) <= 1e-10
          and _within(linear, l1_10)
          and all(e.mean <= math.sqrt(x) + SIGMAS * e.stderr for x, e in zip(xs, capped)))
    return _outcome("dirichlet", "Bohr lift of Dirichlet polynomials", ok,
                    f"x=2: {two.mean:.5f} vs 4/pi; x=30,m=1: {linear.mean:.5f} vs {l1_10:.5f}",
                    x2=two.mean, x2_stderr=two.stderr, x30_linear=linear.mean,
                    x30_linear_stderr=linear.stderr, l1_complex_10=l1_10)


def check_kadets_snobar(ctx: VerifyContext) -> CheckOutcome:
    rng = np.random.default_rng(np.random.SeedSequence(ctx.seed))
    failures = []
    for trial in range(20):
        n = int(rng.integers(1, 5))
        pool = enumerate_indices(IndexKind.FULL_UP_TO, 3, n).members
        size = int(rng.integers(1, len(pool) + 1))
        picks = rng.choice(len(pool), size=size, replace=False)
        J = IndexSet.custom([pool[i] for i in sorted(picks)], n)
        est = montecarlo.torus_exp_sum(J, ctx.samples(20_000, 200_000), ctx.seed + trial, ctx.workers)
        lower = math.sqrt(len(J)) / math.sqrt(2.0) ** 3
        upper = math.sqrt(len(J))
        if not (lower - SIGMAS * est.stderr <= est.mean <= upper + SIGMAS * est.stderr):
            failures.append({"trial": trial, "n": n, "size": len(J), "mean": est.mean})
    return _outcome("kadets-snobar", "Kadets-Snobar bound and Weissler lower bound", not failures,
                    f"{20 - len(failures)}/20 index sets inside the band", failures=failures)


# Boolean cube

def _grunbaum_real(N: int) -> float:
    return 2.0 / math.sqrt(math.pi) * math.exp(gammaln((N + 2) / 2.0) - gammaln((N + 1) / 2.0))


def check_boolean_linear(ctx: VerifyContext) -> CheckOutcome:
    worst = 0.0
    for N in range(1, 16, 2):
        exact = boolean.boolean_proj_exact(boolean.SubsetFamily.homog(1, N), ctx.workers)
        worst = max(worst, abs(exact - _grunbaum_real(N)))
    return _outcome("boolean-linear", "Grünbaum real identification with l_2", worst <= 1e-10,
                    f"worst deviation {worst:.1e}", worst=worst)


def _quadrature_limit(d: int) -> float:
    poly = boolean.pd_polynomial(d)
    roots = closedforms.real_roots(poly.coeffs)

    def integrand(t: float) -> float:
        return abs(float(poly(t))) * math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)

    edges = [-40.0] + roots + [40.0]
    return math.fsum(integrate.quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12)[0]
                     for a, b in zip(edges[:-1], edges[1:]))


def check_boolean_limits(ctx: VerifyContext) -> CheckOutcome:
    closed = {
        2: math.sqrt(2.0 / (math.pi * math.e)),
        3: (1.0 + 4.0 * math.exp(-1.5)) / (3.0 * math.sqrt(2.0 * math.pi)),
    }
    diffs = {d: abs(boolean.boolean_limit(d) - v) for d, v in closed.items()}
    published = [0.0, 30.0 / 120, 0.0, -10.0 / 120, 0.0, 1.0 / 120]
    diffs[5] = abs(closedforms.gaussian_abs_moment(published) - 3.0 / (10.0 * math.sqrt(2.0 * math.pi)))
    diffs[4] = abs(boolean.boolean_limit(4) - _quadrature_limit(4))
    N = 24 if ctx.full else 12
    family = boolean.SubsetFamily.homog(2, N)
    enumerated = boolean.boolean_proj_exact(family, ctx.workers)
    symmetric = float(boolean.boolean_symmetric_exact(2, N))
    at_24 = enumerated / N if ctx.full else float(boolean.boolean_symmetric_exact(2, 24)) / 24
    rel = abs(at_24 - closed[2]) / closed[2]
    ok = all(v <= 1e-8 for v in diffs.values()) and rel <= 0.05 and abs(enumerated - symmetric) <= 1e-9 * symmetric
    return _outcome("boolean-limits", "Boolean central limit of degree-d chaos", ok,
                    f"N=24 ratio off by {rel:.2%}",
                    closed_diffs={str(d): v for d, v in diffs.items()},
                    enumerated=enumerated, symmetric=symmetric, ratio_24=at_24)


def check_boolean_combinatorics(ctx: VerifyContext) -> CheckOutcome:
    ok, values = True, {}
    for d, k, N in ((4, 1, 10), (4, 2, 10), (6, 2, 12)):
        exact = boolean.cdkn_exact(d, k, N)
        excess = exact - boolean.cdkn_main_term(d, k, N)
        ok &= 0 <= excess <= N ** (k - 1) * 2 * d * math.factorial(d)
        values[f"{d},{k},{N}"] = exact
    ratio = boolean.cdkn_exact(4, 1, 14) / 14 / (math.factorial(4) / 2)
    ok &= abs(ratio - 1.0) <= 0.10
    klimek = [boolean.klimek_check(d, N) for d, N in ((2, 8), (3, 9), (4, 10))]
    ok &= all(c["passed"] for c in klimek)
    return _outcome("boolean-combinatorics", "even-index counts and Klimek comparison", ok,
                    f"C_(4,1,14)/14 ratio {ratio:.4f}", counts=values, ratio=ratio)


# Characteristics

def _spaces_for(n: int, ctx: VerifyContext) -> List[SequenceSpace]:
    rs = (1.0, 1.5, 2.0, 3.0) if ctx.full else (1.5, 3.0)
    spaces = [SequenceSpace.lr(r, n) for r in rs]
    spaces.append(SequenceSpace.nakano([1.5 + 0.5 * i for i in range(n)]))
    spaces.append(SequenceSpace.mixed(1.5, 3.0, 1, n) if n == 3 else SequenceSpace.mixed(1.5, 3.0, 2, n // 2))
    return spaces


def _alphas(ctx: VerifyContext) -> List[tuple]:
    sets = [(2, 4)] + ([(3, 3)] if ctx.full else [])
    return [(n, alpha) for m, n in sets for alpha in enumerate_indices(IndexKind.FULL, m, n)]


def check_characteristics(ctx: VerifyContext) -> CheckOutcome:
    worst, failures = 0.0, []
    for n, alpha in _alphas(ctx):
        for space in _spaces_for(n, ctx):
            closed = characteristic_closed(space, alpha).value
            oracle = characteristic_bruteforce(space, alpha, ctx.opt).value
            rel = abs(oracle - closed) / closed
            worst = max(worst, rel)
            if rel > 1e-4:
                failures.append(f"{space.describe()} {alpha.entries}")
        for space in (SequenceSpace.lorentz(2.0, 1.0, n), SequenceSpace.lorentz(3.0, math.inf, n)):
            interval = characteristic_closed(space, alpha)
            oracle = characteristic_bruteforce(space, alpha, ctx.opt).value
            if not interval.contains(oracle, rel_tol=1e-4):
                failures.append(f"{space.describe()} {alpha.entries}")
    return _outcome("characteristics", "closed characteristics against the sphere oracle", not failures,
                    f"worst relative deviation {worst:.1e}", worst=worst, failures=failures)


def check_duality(ctx: VerifyContext) -> CheckOutcome:
    worst_closed, worst_mixed = 0.0, 0.0
    alphas = list(enumerate_indices(IndexKind.FULL, 2, 4))
    for r in (1.5, 2.0, 3.0):
        for alpha in alphas:
            worst_closed = max(worst_closed, duality_defect(SequenceSpace.lr(r, 4), alpha))
    mixed_alphas = alphas if ctx.full else alphas[:4]
    for alpha in mixed_alphas:
        worst_mixed = max(worst_mixed, duality_defect(SequenceSpace.mixed(1.5, 3.0, 2, 2), alpha,
                                                      "bruteforce", ctx.opt))
    return _outcome("duality", "characteristic duality identity", worst_closed <= 1e-8 and worst_mixed <= 1e-4,
                    f"closed {worst_closed:.1e}, oracle {worst_mixed:.1e}",
                    closed=worst_closed, oracle=worst_mixed)


# Polynomial projection constants

def check_hat_lambda(ctx: VerifyContext) -> CheckOutcome:
    worst = 0.0
    ns = range(1, 9) if ctx.full else (2, 4, 8)
    for r in (1.0, 2.0, 4.0):
        for n in ns:
            value = projbohr.poly_proj_const(SequenceSpace.lr(r, n), enumerate_indices(IndexKind.FULL, 1, n),
                                             ctx.opt).value
            rc = conjugate(r)
            target = 1.0 if math.isinf(rc) else n ** (1.0 / rc)
            worst = max(worst, abs(value - target))
    sandwich = []
    for m, n in ((2, 6), (3, 6)) if ctx.full else ((2, 6),):
        space = SequenceSpace.lr(2.0, n)
        value = projbohr.poly_proj_const(space, enumerate_indices(IndexKind.TETRAHEDRAL, m, n), ctx.opt).value
        lower = (dual_fundamental(space, n) / dual_fundamental(space, m)) ** m
        sandwich.append(lower * (1 - 1e-8) <= value <= math.e ** m * lower * (1 + 1e-8))
    return _outcome("hat-lambda", "degree-one exactness and tetrahedral sandwich",
                    worst <= 1e-6 and all(sandwich), f"degree-one deviation {worst:.1e}",
                    worst=worst, sandwich=sandwich)


def check_catalog(ctx: VerifyContext) -> CheckOutcome:
    J = enumerate_indices(IndexKind.FULL, 2, 2)
    space = SequenceSpace.linf(2)
    mc = montecarlo.torus_exp_sum(J, ctx.samples(100_000), ctx.seed, ctx.workers)
    report = projbohr.bounds_catalog(space, J, mc, ctx.opt)
    problems = report.inconsistencies()
    return _outcome("catalog", "Kadets-Snobar and hat-lambda bounds around the torus estimate",
                    not problems, "; ".join(problems) or f"estimate {mc.mean:.5f}",
                    estimate=mc.mean, stderr=mc.stderr)


# Quadrature

def check_lebesgue(ctx: VerifyContext) -> CheckOutcome:
    failures = []
    for m in range(1, 201):
        L = closedforms.lebesgue_constant(m, config=ctx.quad)
        if not 4.0 / math.pi ** 2 * math.log(m + 1) < L < 3.0 + math.log(m):
            failures.append(m)
    worst = max(abs(closedforms.lebesgue_constant(2 * m, True, ctx.quad)
                    - closedforms.lebesgue_constant(m, config=ctx.quad)) for m in range(0, 51))
    return _outcome("lebesgue", "Dirichlet kernel L^1 norms", not failures and worst <= 1e-10,
                    f"analytic identity deviation {worst:.1e}", failures=failures, worst=worst)


def check_kappa(ctx: VerifyContext) -> CheckOutcome:
    kappa = closedforms.kappa_constant()
    return _outcome("kappa", "inverse sinc product over the primes", abs(kappa - 2.209) <= 1e-3,
                    f"kappa = {kappa:.6f}", kappa=kappa)


# Bohr radii

def check_bohr(ctx: VerifyContext) -> CheckOutcome:
    witness = projbohr.one_variable_witness()
    wiener = projbohr.wiener_check(seed=ctx.seed, tol=1e-9)
    radius = witness["radius_estimate"]
    inside = projbohr.BOHR_RADIUS - 1e-3 <= radius <= projbohr.BOHR_RADIUS + 0.02
    ok = inside and witness["majorant_ok_at_one_third"] and witness["violated_above"] and wiener["passed"]
    return _outcome("bohr-radius", "Möbius witnesses and the Wiener inequality", ok,
                    f"radius estimate {radius:.6f}", radius=radius,
                    wiener_worst=wiener["worst_excess"])


def check_uncond(ctx: VerifyContext) -> CheckOutcome:
    J = enumerate_indices(IndexKind.FULL_UP_TO, 8, 1)
    est = projbohr.uncond_basis_lower(SequenceSpace.linf(1), J, ctx.opt)
    return _outcome("uncond-rudin-shapiro", "Rudin-Shapiro polynomials",
                    est.value >= 1.9, f"estimate {est.value:.4f}", estimate=est.value)


def check_determinism(ctx: VerifyContext) -> CheckOutcome:
    J = enumerate_indices(IndexKind.FULL, 2, 3)
    runs = [montecarlo.torus_exp_sum(J, 50_000, ctx.seed, ctx.workers) for _ in range(2)]
    same = runs[0].mean == runs[1].mean and runs[0].stderr == runs[1].stderr
    return _outcome("determinism", "seeded Philox streams", same,
                    "identical reruns" if same else "reruns differ", mean=runs[0].mean)


Check = Tuple[str, Callable[[VerifyContext], CheckOutcome]]

CORE_CHECKS: List[Check] = [
    ("rw-sphere", check_rw_sphere),
    ("l1-complex", check_l1_complex),
    ("trace-class", check_trace_class),
    ("boolean-linear", check_boolean_linear),
    ("boolean-limits", check_boolean_limits),
    ("boolean-combinatorics", check_boolean_combinatorics),
    ("characteristics", check_characteristics),
    ("duality", check_duality),
    ("hat-lambda", check_hat_lambda),
    ("lebesgue", check_lebesgue),
    ("kadets-snobar", check_kadets_snobar),
    ("catalog", check_catalog),
    ("bohr-radius", check_bohr),
    ("dirichlet", check_dirichlet),
    ("kappa", check_kappa),
    ("determinism", check_determinism),
]

FULL_CHECKS: List[Check] = CORE_CHECKS + [("uncond-rudin-shapiro", check_uncond)]


def run_suite(rc: RunConfig, state: RunState) -> List[CheckOutcome]:
    ctx = VerifyContext(
        suite=rc.suite,
        seed=rc.seed,
        workers=rc.workers,
        opt=OptimizerConfig.from_config(rc.config, seed=rc.seed, workers=rc.workers),
        quad=QuadratureConfig.from_config(rc.config),
    )
    checks = FULL_CHECKS if ctx.full else CORE_CHECKS
    bus.log_action(f"verify suite {rc.suite}: {len(checks)} checks")
    for name, fn in checks:
        try:
            outcome = fn(ctx)
        except ProjLabError as e:
            outcome = _outcome(name, "error", False, f"{type(e).__name__}: {e}")
        state.record_check(outcome)
        bus.log_check(f"{'PASS' if outcome.passed else 'FAIL'} {outcome.name}: {outcome.detail}")
    return state.get_checks()


def render_checks(outcomes: List[CheckOutcome], fmt: str) -> str:
    if fmt == "json":
        return render_json({"checks": [o.to_dict() for o in outcomes],
                            "passed": all(o.passed for o in outcomes)})
    rows = [ResultRow("check", {"name": o.name}, 1.0 if o.passed else 0.0, o.provenance,
                      extra={"detail": o.detail}) for o in outcomes]
    if fmt == "csv":
        return render_csv(rows)
    lines = [f"{'PASS' if o.passed else 'FAIL'}  {o.name:<24} {o.detail}" for o in outcomes]
    failed = sum(not o.passed for o in outcomes)
    lines.append(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return "\n".join(lines) + "\n"
