"""compute, sweep and table: quantity dispatch for the command line."""

import itertools
import math
from typing import Callable, Dict, List, Union

from projlab.cli.output import ResultRow, render_csv, render_json, render_rows
from projlab.cli.parsing import RunConfig
from projlab.errors import NoClosedForm, OutOfRange, ParseError
from projlab.lab import boolean, closedforms, montecarlo, projbohr
from projlab.lab.characteristics import (
    characteristic, characteristic_bruteforce, duality_defect
)
from projlab.lab.closedforms import QuadratureConfig
from projlab.lab.indexsets import parse_index_set
from projlab.lab.optimize import OptimizerConfig
from projlab.lab.projbohr import BoundReport
from projlab.lab.spaces import Family, SequenceSpace, calderon_exponent, parse_space
from projlab.shared_state import bus

Outcome = Union[List[ResultRow], BoundReport]

FOUR_OVER_PI2 = 4.0 / math.pi ** 2


# Helpers

def _need(rc: RunConfig, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(rc, n) is None]
    if missing:
        raise ParseError(f"quantity {rc.quantity!r} needs {', '.join(missing)}")


def _opt(rc: RunConfig) -> OptimizerConfig:
    return OptimizerConfig.from_config(rc.config, seed=rc.seed, workers=rc.workers)


def _quad(rc: RunConfig) -> QuadratureConfig:
    return QuadratureConfig.from_config(rc.config)


def _cap(rc: RunConfig) -> int:
    return int(rc.config.get("enumeration", {}).get("cap", 10_000_000))


def _index_set(rc: RunConfig):
    _need(rc, "index_set")
    return parse_index_set(rc.index_set, rc.n, cap=_cap(rc))


def _space(rc: RunConfig, n: int) -> SequenceSpace:
    _need(rc, "space")
    return parse_space(rc.space, n)


def _row(quantity: str, params: dict, value, provenance: str, **kw) -> List[ResultRow]:
    return [ResultRow(quantity, params, None if value is None else float(value), provenance, **kw)]


def _mc_row(est: montecarlo.MCEstimate, **kw) -> List[ResultRow]:
    params = dict(est.params)
    params.update({"samples": est.samples, "seed": est.seed, "workers": est.workers})
    return [ResultRow(est.quantity, params, est.mean, "MC", stderr=est.stderr, **kw)]


# Quantities

def q_rw(rc: RunConfig) -> Outcome:
    _need(rc, "n", "m")
    return _row("rw", {"n": rc.n, "m": rc.m}, closedforms.proj_hilbert_homog(rc.n, rc.m),
                "Ryll-Wojtaszczyk gamma ratio", upper_bound=2.0 ** (rc.n - 1))


def q_hilbert_invariant(rc: RunConfig) -> Outcome:
    _need(rc, "n", "degrees")
    value = closedforms.proj_hilbert_invariant(rc.n, rc.degrees, _quad(rc))
    lower = closedforms.hilbert_invariant_lower(rc.n, rc.degrees)
    return _row("hilbert_invariant", {"n": rc.n, "degrees": sorted(set(rc.degrees))}, value,
                "unitarily invariant radial integral", lower_bound=lower)


def q_hilbert_growth(rc: RunConfig) -> Outcome:
    _need(rc, "n", "m")
    report = closedforms.hilbert_full_growth_report(rc.n, rc.m)
    return _row("hilbert_full_growth", {"n": rc.n, "m": rc.m}, report["upper_growth"],
                "order of growth only, constant unknown", lower_bound=report["lower"])


def q_lebesgue(rc: RunConfig) -> Outcome:
    _need(rc, "m")
    value = closedforms.lebesgue_constant(rc.m, rc.analytic, _quad(rc))
    return _lebesgue_rows(rc.m, value, rc.analytic)


def _lebesgue_rows(m: int, value: float, analytic: bool) -> List[ResultRow]:
    lower = FOUR_OVER_PI2 * math.log(m + 1) if m >= 1 else None
    upper = 3.0 + math.log(m) if m >= 1 else None
    name = "lebesgue_analytic" if analytic else "lebesgue"
    prov = "L^1 norm of the analytic Dirichlet kernel" if analytic else "L^1 norm of the Dirichlet kernel"
    return _row(name, {"m": m}, value, prov, lower_bound=lower, upper_bound=upper)


def q_trig_product(rc: RunConfig) -> Outcome:
    _need(rc, "degrees")
    return _row("trig_product", {"degrees": rc.degrees}, closedforms.trig_product(rc.degrees, _quad(rc)),
                "Lozinski-Kharshiladze product of Lebesgue constants")


def q_box_product(rc: RunConfig) -> Outcome:
    _need(rc, "degrees")
    return _row("box_product", {"degrees": rc.degrees}, closedforms.box_product(rc.degrees, _quad(rc)),
                "product of analytic Lebesgue constants")


def q_l2(rc: RunConfig) -> Outcome:
    _need(rc, "n")
    return _row("l2", {"n": rc.n, "field": rc.number_field},
                closedforms.proj_l2(rc.n, rc.number_field), "Grünbaum gamma ratio",
                upper_bound=math.sqrt(rc.n))


def q_l1_complex(rc: RunConfig) -> Outcome:
    _need(rc, "n")
    return _row("l1_complex", {"n": rc.n}, closedforms.proj_l1_complex(rc.n, _quad(rc)),
                "Grünbaum Bessel integral", upper_bound=math.sqrt(rc.n))


def q_l1_real(rc: RunConfig) -> Outcome:
    _need(rc, "n")
    return _row("l1_real", {"n": rc.n}, closedforms.proj_l1_real(rc.n),
                "Grünbaum real identification with l_2", upper_bound=math.sqrt(rc.n))


def q_kappa(rc: RunConfig) -> Outcome:
    return _row("kappa", {}, closedforms.kappa_constant(), "inverse sinc product over the primes")


def q_boolean_limit(rc: RunConfig) -> Outcome:
    _need(rc, "d")
    return _row("boolean_limit", {"d": rc.d}, boolean.boolean_limit(rc.d),
                "Boolean central limit theorem")


def q_boolean_exact(rc: RunConfig) -> Outcome:
    _need(rc, "n")
    family = boolean.SubsetFamily.parse(rc.index_set or f"homog:{rc.d if rc.d is not None else 1}", rc.n)
    cap = int(rc.config.get("boolean", {}).get("exact_cap", boolean.EXACT_CAP))
    result = boolean.boolean_proj(family, rc.samples, rc.seed, rc.workers, cap)
    upper = math.sqrt(len(family))
    lower = upper / math.e ** family.degree
    params = {"family": family.describe(), "size": len(family)}
    if isinstance(result, montecarlo.MCEstimate):
        return _mc_row(result, lower_bound=lower, upper_bound=upper)
    return _row("boolean_exact", params, result, "exact Gray-code enumeration of the cube",
                lower_bound=lower, upper_bound=upper)


def q_boolean_symmetric(rc: RunConfig) -> Outcome:
    _need(rc, "d", "n")
    up_to = (rc.index_set or "").strip().lower().startswith("upto")
    value = boolean.boolean_symmetric_exact(rc.d, rc.n, up_to=up_to)
    return _row("boolean_symmetric", {"d": rc.d, "N": rc.n, "up_to": up_to}, float(value),
                "exact sum over Krawtchouk values")


def q_cdkn(rc: RunConfig) -> Outcome:
    _need(rc, "d", "k", "n")
    main = boolean.cdkn_main_term(rc.d, rc.k, rc.n)
    slack = rc.n ** (rc.k - 1) * 2 * rc.d * math.factorial(rc.d)
    return _row("cdkn", {"d": rc.d, "k": rc.k, "N": rc.n}, boolean.cdkn_exact(rc.d, rc.k, rc.n),
                "exact multinomial count over even indices", lower_bound=main, upper_bound=main + slack)


def q_klimek(rc: RunConfig) -> Outcome:
    _need(rc, "d", "n")
    check = boolean.klimek_check(rc.d, rc.n)
    return _row("klimek", {"d": rc.d, "N": rc.n}, check["homog"],
                "Klimek (1+sqrt 2)^d comparison", upper_bound=check["bound"],
                extra={"passed": check["passed"]})


def q_characteristic(rc: RunConfig) -> Outcome:
    _need(rc, "alpha")
    space = _space(rc, len(rc.alpha))
    ch = characteristic(space, rc.alpha, _opt(rc))
    return _row("characteristic", {"space": space.describe(), "alpha": list(rc.alpha.entries)},
                ch.value, f"{ch.label} ({ch.provenance.value})", lower_bound=ch.lo, upper_bound=ch.hi)


def q_duality_defect(rc: RunConfig) -> Outcome:
    _need(rc, "alpha")
    space = _space(rc, len(rc.alpha))
    try:
        value, method = duality_defect(space, rc.alpha, "closed"), "closed"
    except NoClosedForm:
        value, method = duality_defect(space, rc.alpha, "bruteforce", _opt(rc)), "bruteforce"
    return _row("duality_defect", {"space": space.describe(), "alpha": list(rc.alpha.entries),
                                   "method": method},
                value, "characteristic duality identity")


def q_bruteforce(rc: RunConfig) -> Outcome:
    _need(rc, "alpha")
    space = _space(rc, len(rc.alpha))
    ch = characteristic_bruteforce(space, rc.alpha, _opt(rc))
    return _row("characteristic_bruteforce", {"space": space.describe(), "alpha": list(rc.alpha.entries)},
                ch.value, ch.label)


def q_poly_proj(rc: RunConfig) -> Outcome:
    J = _index_set(rc)
    space = _space(rc, J.dimension)
    hat = projbohr.poly_proj_const(space, J, _opt(rc))
    return _row("poly_proj_const", {"space": space.describe(), "size": len(J)}, hat.value, hat.label,
                lower_bound=hat.lo, upper_bound=hat.hi)


def q_hat_interpolation(rc: RunConfig) -> Outcome:
    _need(rc, "theta")
    J = _index_set(rc)
    n = J.dimension
    cfg = _opt(rc)
    r = calderon_exponent(1.0, math.inf, rc.theta)
    middle = projbohr.poly_proj_const(SequenceSpace.lr(r, n), J, cfg).value
    ends = (projbohr.poly_proj_const(SequenceSpace.lr(1.0, n), J, cfg).value,
            projbohr.poly_proj_const(SequenceSpace.linf(n), J, cfg).value)
    bound = ends[0] ** (1 - rc.theta) * ends[1] ** rc.theta
    return _row("hat_interpolation", {"theta": rc.theta, "r": r, "size": len(J)}, middle,
                "interpolation of l_1 and l_inf", upper_bound=bound)


def q_uncond(rc: RunConfig) -> Outcome:
    J = _index_set(rc)
    space = _space(rc, J.dimension)
    est = projbohr.uncond_basis_lower(space, J, _opt(rc))
    return _row("uncond_basis_lower", {"space": space.describe(), "size": len(J)}, est.value,
                est.note, lower_bound=1.0, upper_bound=float(len(J)),
                extra={"evaluations": est.evaluations, "budget_exhausted": est.budget_exhausted})


def q_bohr_homog(rc: RunConfig) -> Outcome:
    _need(rc, "m")
    J = _index_set(rc)
    space = _space(rc, J.dimension)
    est = projbohr.bohr_radius_homog(space, J, rc.m, _opt(rc))
    return _row("bohr_radius_homog", {"space": space.describe(), "m": rc.m, "size": est.size},
                est.value, "oracle", lower_bound=est.size ** (-1.0 / rc.m),
                upper_bound=1.0, extra={"prediction": est.prediction})


def q_bohr_sandwich(rc: RunConfig) -> Outcome:
    _need(rc, "m")
    J = _index_set(rc)
    return projbohr.bohr_sandwich(_space(rc, J.dimension), J, rc.m, _opt(rc))


def q_catalog(rc: RunConfig) -> Outcome:
    J = _index_set(rc)
    space = _space(rc, J.dimension)
    mc = None
    if space.family == Family.LINF:
        mc = montecarlo.torus_exp_sum(J, rc.samples, rc.seed, rc.workers)
    return projbohr.bounds_catalog(space, J, mc, _opt(rc))


def q_conjecture(rc: RunConfig) -> Outcome:
    _need(rc, "m", "n")
    space = _space(rc, 1)
    rows = []
    for row in projbohr.conjecture_report(space, rc.m, range(2, rc.n + 1), _opt(rc)):
        rows += _row("conjecture_ratio", {"space": space.describe(), "m": rc.m, "n": row["n"]},
                     row["ratio"], "oracle")
    return rows


def q_torus(rc: RunConfig) -> Outcome:
    J = _index_set(rc)
    est = montecarlo.torus_exp_sum(J, rc.samples, rc.seed, rc.workers)
    m = J.degree
    return _mc_row(est, lower_bound=math.sqrt(len(J)) / math.sqrt(2.0) ** m,
                   upper_bound=math.sqrt(len(J)))


def q_trace_class(rc: RunConfig) -> Outcome:
    _need(rc, "n")
    est = montecarlo.trace_class(rc.n, rc.samples, rc.seed, rc.workers)
    return _mc_row(est)


def q_sphere_invariant(rc: RunConfig) -> Outcome:
    _need(rc, "n", "degrees")
    est = montecarlo.sphere_invariant(rc.n, rc.degrees, rc.samples, rc.seed, rc.workers)
    return _mc_row(est)


def q_dirichlet(rc: RunConfig) -> Outcome:
    _need(rc, "x")
    est = montecarlo.dirichlet_projection(rc.x, rc.m, rc.samples, rc.seed, rc.workers, _cap(rc))
    return _mc_row(est, upper_bound=math.sqrt(rc.x))


def q_dirichlet_time(rc: RunConfig) -> Outcome:
    _need(rc, "x")
    est = montecarlo.dirichlet_time_average(rc.x, samples=rc.samples, seed=rc.seed, workers=rc.workers)
    return _mc_row(est)


QUANTITIES: Dict[str, Callable[[RunConfig], Outcome]] = {
    "rw": q_rw,
    "hilbert-invariant": q_hilbert_invariant,
    "hilbert-growth": q_hilbert_growth,
    "lebesgue": q_lebesgue,
    "trig-product": q_trig_product,
    "box-product": q_box_product,
    "l2": q_l2,
    "l1-complex": q_l1_complex,
    "l1-real": q_l1_real,
    "kappa": q_kappa,
    "boolean-limit": q_boolean_limit,
    "boolean-exact": q_boolean_exact,
    "boolean-symmetric": q_boolean_symmetric,
    "cdkn": q_cdkn,
    "klimek": q_klimek,
    "characteristic": q_characteristic,
    "characteristic-bruteforce": q_bruteforce,
    "duality-defect": q_duality_defect,
    "poly-proj": q_poly_proj,
    "hat-interpolation": q_hat_interpolation,
    "uncond": q_uncond,
    "bohr-homog": q_bohr_homog,
    "bohr-sandwich": q_bohr_sandwich,
    "catalog": q_catalog,
    "conjecture": q_conjecture,
    "torus": q_torus,
    "trace-class": q_trace_class,
    "sphere-invariant": q_sphere_invariant,
    "dirichlet": q_dirichlet,
    "dirichlet-time": q_dirichlet_time,
}


def compute_quantity(rc: RunConfig) -> Outcome:
    fn = QUANTITIES.get((rc.quantity or "").strip().lower())
    if fn is None:
        raise ParseError(f"unknown quantity {rc.quantity!r}; known: {', '.join(sorted(QUANTITIES))}")
    bus.log_action(f"compute {rc.quantity}")
    return fn(rc)


def report_rows(report: BoundReport) -> List[ResultRow]:
    rows = []
    for e in report.entries:
        params = dict(report.params)
        params.update({"label": e.label, "kind": e.kind})
        rows.append(ResultRow(
            report.quantity, params, e.value, e.provenance,
            stderr=e.stderr or None,
            lower_bound=e.value if e.kind == "lower" else None,
            upper_bound=e.value if e.kind == "upper" else None,
        ))
    return rows


def render_outcome(outcome: Outcome, fmt: str) -> str:
    if isinstance(outcome, BoundReport):
        if fmt == "json":
            return render_json(outcome.to_dict())
        if fmt == "text":
            return outcome.to_text()
        return render_csv(report_rows(outcome))
    return render_rows(outcome, fmt)


def run_compute(rc: RunConfig) -> str:
    return render_outcome(compute_quantity(rc), rc.format)


def run_sweep(rc: RunConfig) -> str:
    names = [name for name, _ in rc.grid]
    rows: List[ResultRow] = []
    for combo in itertools.product(*[values for _, values in rc.grid]):
        point = rc.with_params(**dict(zip(names, combo)))
        outcome = compute_quantity(point)
        rows.extend(report_rows(outcome) if isinstance(outcome, BoundReport) else outcome)
    return render_rows(rows, rc.format) if rows else render_json([])


# Tables

LEBESGUE_TABLE_M = (0, 1, 2, 3, 4, 5, 10, 20, 50, 100, 200)
HARPER_TABLE_X = (30, 100, 300, 1000, 3000)


def table_boolean_limits(rc: RunConfig) -> List[ResultRow]:
    rows = []
    for d in range(1, 9):
        finite_N = 400
        normalized = float(boolean.boolean_symmetric_exact(d, finite_N)) / finite_N ** (d / 2)
        rows += _row("boolean_limit", {"d": d}, boolean.boolean_limit(d),
                     "Boolean central limit theorem",
                     extra={"finite_N": finite_N, "finite_N_normalized": normalized})
    return rows


def table_grunbaum(rc: RunConfig) -> List[ResultRow]:
    quad = _quad(rc)
    rows = []
    for n in range(1, 17):
        bound = math.sqrt(n)
        rows += _row("l2_complex", {"n": n}, closedforms.proj_l2(n, "complex"), "Grünbaum gamma ratio",
                     upper_bound=bound)
        rows += _row("l2_real", {"n": n}, closedforms.proj_l2(n, "real"), "Grünbaum gamma ratio",
                     upper_bound=bound)
        rows += _row("l1_complex", {"n": n}, closedforms.proj_l1_complex(n, quad),
                     "Grünbaum Bessel integral", upper_bound=bound)
        rows += _row("l1_real", {"n": n}, closedforms.proj_l1_real(n),
                     "Grünbaum real identification with l_2", upper_bound=bound)
    return rows


def table_lebesgue(rc: RunConfig) -> List[ResultRow]:
    quad = _quad(rc)
    rows = []
    for m in LEBESGUE_TABLE_M:
        rows += _lebesgue_rows(m, closedforms.lebesgue_constant(m, False, quad), False)
        rows += _lebesgue_rows(m, closedforms.lebesgue_constant(m, True, quad), True)
    return rows


def table_harper(rc: RunConfig) -> List[ResultRow]:
    rows = []
    for entry in montecarlo.harper_shape_table(HARPER_TABLE_X, rc.samples, rc.seed, rc.workers):
        rows += _row("harper_ratio", {"x": entry["x"]}, entry["ratio"],
                     "estimate / (sqrt(x) / (log log x)^(1/4)), constant unknown",
                     stderr=entry["stderr"] / entry["shape"],
                     extra={"estimate": entry["estimate"], "shape": entry["shape"]})
    return rows


TABLES: Dict[str, Callable[[RunConfig], List[ResultRow]]] = {
    "boolean-limits": table_boolean_limits,
    "grunbaum": table_grunbaum,
    "lebesgue": table_lebesgue,
    "harper": table_harper,
}


def run_table(rc: RunConfig) -> str:
    fn = TABLES.get(rc.table or "")
    if fn is None:
        raise OutOfRange(f"unknown table {rc.table!r}")
    bus.log_action(f"table {rc.table}")
    return render_rows(fn(rc), rc.format)

