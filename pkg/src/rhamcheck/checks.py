"""Executable checks: the bridge between scenario files and the library.

Each check kind maps to one verification routine; a check returns a
CheckResult with a pass/fail/skip status and a flat list of detail
key/value pairs rendered canonically (deterministic across runs for
fixed seed and quadrature order, so reports are byte-identical).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .comparison import (
    ParamSimplex,
    VarietyPresentation,
    chain_map_residual,
    multiplicativity_check,
    naturality_residual,
    period,
    period_cochain,
    singular_aw_cup,
)
from .derham import AlgebraicForm, FpAlgebra, differential as d_algebraic, truncated_cohomology
from .errors import RhamcheckError, ValidationError
from .linalg import SparseMatrix, kernel_image
from .poly import Polynomial
from .scenarios import check_rng_seed, named_complex
from .simplex_forms import (
    FamilyComplex,
    FormsFamily,
    PolyForm,
    cone_homotopy,
    differential as d_simplex,
    extend_from_boundary,
    homotopy_defect,
    parse_poly_form,
    pullback_delta,
    simplex_variables,
    to_cochain,
    wedge as wedge_simplex,
)
from .simplicial import (
    Chain,
    Cochain,
    DeltaMorphism,
    aw_cup,
    coboundary,
    fundamental_boundary_cycle,
    pair,
    simplicial_cohomology,
    unit_cochain,
)

DEFAULT_SEED = 902214
DEFAULT_MAX_WEIGHT = 4


class Settings:
    def __init__(self, quad_order=16, max_weight=None, tolerance=None, seed=DEFAULT_SEED):
        self.quad_order = quad_order
        self.max_weight = max_weight
        self.tolerance = tolerance
        self.seed = seed


class CheckResult:
    def __init__(self, name, kind):
        self.name = name
        self.kind = kind
        self.status = "pass"
        self.details = []
        self.message = ""

    def detail(self, key, value):
        self.details.append((key, render_value(value)))

    def fail(self, message):
        self.status = "fail"
        if not self.message:
            self.message = message

    def skip(self, message):
        self.status = "skip"
        self.message = message


def render_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return "%d/%d" % (value.numerator, value.denominator)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _tolerance(check, settings, estimate):
    if settings.tolerance is not None:
        return settings.tolerance
    if "tolerance" in check.params:
        return float(check.params["tolerance"])
    return 10.0 * float(estimate)


def _parse_number(text):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return Fraction(int(text))


def _within(value, target, tolerance):
    return abs(float(value) - float(target)) <= float(tolerance) + 1e-300


# ---------------------------------------------------------------------------
# samplers for the randomized checks


def _random_poly(rng, variables, max_degree):
    terms = {}
    nvars = len(variables)
    for _ in range(rng.randint(1, 3)):
        e = [0] * nvars
        if nvars:
            for _ in range(rng.randint(0, max_degree)):
                e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-4, 4))
    return Polynomial(variables, terms)


def _random_poly_form(rng, n, degree, max_coeff_degree):
    variables = simplex_variables(n)
    terms = {}
    for S in combinations(range(n), degree):
        if rng.random() < 0.75:
            poly = _random_poly(rng, variables, max_coeff_degree)
            if not poly.is_zero():
                terms[S] = poly
    return PolyForm(n, degree, terms)


def _random_algebraic_form(rng, algebra, degree, max_coeff_degree=2):
    terms = {}
    for S in combinations(range(algebra.nvars), degree):
        if rng.random() < 0.8:
            poly = _random_poly(rng, algebra.variables, max_coeff_degree)
            if not poly.is_zero():
                terms[S] = poly
    return AlgebraicForm(algebra, degree, terms)


def _random_simplex(rng, variety, n, max_degree=2):
    variables = simplex_variables(n)
    comps = [_random_poly(rng, variables, max_degree) for _ in range(variety.ambient_dimension)]
    return ParamSimplex(n, variety, comps)


def _random_cochain(rng, complex_, p):
    return Cochain(
        complex_, p, {s: Fraction(rng.randint(-5, 5)) for s in complex_.n_simplices(p)}
    )


# ---------------------------------------------------------------------------
# check implementations


def check_validate(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    expect = check.params.get("expect", "valid")
    names = check.params.get("simplices", check.params.get("simplex", "")).split()
    for sname in names:
        cert = scenario.simplices[sname].validate()
        result.detail("%s.valid" % sname, cert.valid)
        if cert.valid != (expect == "valid"):
            result.fail("simplex %s: expected %s" % (sname, expect))
        if not cert.valid:
            j, residual = cert.residuals[0]
            result.detail("%s.residual" % sname, residual)
    return result


def check_cohomology(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    degree = int(check.params["degree"])
    cutoff = settings.max_weight or int(check.params.get("max_weight", DEFAULT_MAX_WEIGHT))
    h = truncated_cohomology(scenario.algebra, degree, cutoff)
    result.detail("degree", degree)
    result.detail("max_weight", cutoff)
    result.detail("dimension", h.dimension)
    result.detail("stabilized", h.stabilized)
    if "expect_dim" in check.params and h.dimension != int(check.params["expect_dim"]):
        result.fail("dimension %d != expected %s" % (h.dimension, check.params["expect_dim"]))
    if "expect_min_dim" in check.params and h.dimension < int(check.params["expect_min_dim"]):
        result.fail("dimension %d below %s" % (h.dimension, check.params["expect_min_dim"]))
    if check.params.get("expect_stabilized") == "true" and not h.stabilized:
        result.fail("truncation did not stabilize at cutoff %d" % cutoff)
    if "class_nonzero" in check.params:
        form = scenario.forms[check.params["class_nonzero"]]
        if not d_algebraic(form).is_zero():
            result.fail("form %s is not closed" % check.params["class_nonzero"])
        else:
            coords = h.class_of(form)
            nonzero = any(c != 0 for c in coords)
            result.detail("class_coordinates", " ".join(render_value(c) for c in coords))
            if not nonzero:
                result.fail("class of %s vanishes" % check.params["class_nonzero"])
    return result


def check_poincare(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 50))
    max_dim = int(check.params.get("max_dim", 3))
    max_degree = int(check.params.get("max_degree", 6))
    worst = 0
    for _ in range(count):
        n = rng.randint(1, max_dim)
        degree = rng.randint(0, n)
        alpha = _random_poly_form(rng, n, degree, max_degree)
        defect = homotopy_defect(alpha)
        if not defect.is_zero():
            result.fail("contraction identity failed on %s" % alpha)
            break
    result.detail("count", count)
    result.detail("max_defect", 0 if result.status == "pass" else "nonzero")
    return result


def check_chain_map(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    form = scenario.forms[check.params["form"]]
    simplex = scenario.simplices[check.params["simplex"]]
    residual, estimate = chain_map_residual(form, simplex, settings.quad_order)
    result.detail("residual", residual)
    result.detail("estimate", estimate)
    if simplex.lane == "exact":
        if residual != 0:
            result.fail("exact-lane residual %s" % residual)
    else:
        tol = _tolerance(check, settings, estimate)
        result.detail("tolerance", tol)
        if not _within(residual, 0, tol):
            result.fail("residual %r above tolerance %r" % (residual, tol))
    return result


def check_chain_map_random(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 50))
    num_vars = int(check.params.get("num_vars", 2))
    variety = VarietyPresentation(FpAlgebra(("x", "y", "z")[:num_vars], []))
    for _ in range(count):
        p = rng.randint(0, num_vars - 1)
        sigma = _random_simplex(rng, variety, p + 1)
        omega = _random_algebraic_form(rng, variety.algebra, p)
        residual, _ = chain_map_residual(omega, sigma)
        if residual != 0:
            result.fail("nonzero Stokes residual %s" % residual)
            break
    result.detail("count", count)
    result.detail("residual", 0 if result.status == "pass" else "nonzero")
    return result


def check_naturality_random(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 30))
    num_vars = int(check.params.get("num_vars", 2))
    variety = VarietyPresentation(FpAlgebra(("x", "y", "z")[:num_vars], []))
    for _ in range(count):
        n = rng.randint(1, 3)
        m = rng.randint(0, n)
        h = DeltaMorphism(m, n, sorted(rng.randint(0, n) for _ in range(m + 1)))
        sigma = _random_simplex(rng, variety, n)
        omega = _random_algebraic_form(rng, variety.algebra, rng.randint(0, min(2, num_vars)))
        if not naturality_residual(sigma, h, omega).is_zero():
            result.fail("naturality residual nonzero")
            break
    result.detail("count", count)
    result.detail("residual", 0 if result.status == "pass" else "nonzero")
    return result


def check_pairing(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    form = scenario.forms[check.params["form"]]
    chain = scenario.chains[check.params["chain"]]
    family = scenario.chain_family[check.params["chain"]]
    cochain, estimates = period_cochain(form, family, settings.quad_order)
    value = pair(cochain, chain)
    estimate = sum(
        abs(c) * float(estimates.get(name, 0)) for name, c in sorted(chain.coeffs.items())
    )
    result.detail("value", value)
    result.detail("estimate", estimate)
    if "expect" in check.params:
        target = _parse_number(check.params["expect"])
        tol = _tolerance(check, settings, estimate)
        result.detail("expect", target)
        result.detail("tolerance", tol)
        if not _within(value, target, tol):
            result.fail("pairing %r missed %r by more than %r" % (value, target, tol))
    return result


def check_multiplicativity(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    form1 = scenario.forms[check.params["form1"]]
    form2 = scenario.forms[check.params["form2"]]
    chain = scenario.chains[check.params["chain"]]
    family = scenario.chain_family[check.params["chain"]]
    lhs, rhs, estimate = multiplicativity_check(
        form1, form2, family, chain, settings.quad_order
    )
    residual = lhs - rhs
    result.detail("lhs", lhs)
    result.detail("rhs", rhs)
    result.detail("residual", residual)
    result.detail("estimate", estimate)
    tol = _tolerance(check, settings, estimate)
    result.detail("tolerance", tol)
    if isinstance(residual, Fraction) and float(tol) == 0.0:
        if residual != 0:
            result.fail("exact residual %s" % residual)
    elif not _within(residual, 0, tol):
        result.fail("residual %r above tolerance %r" % (residual, tol))
    if "expect" in check.params:
        target = _parse_number(check.params["expect"])
        expect_tol = float(check.params.get("expect_tolerance", tol))
        result.detail("expect", target)
        result.detail("expect_tolerance", expect_tol)
        if not _within(lhs, target, expect_tol):
            result.fail("pairing %r missed %r by more than %r" % (lhs, target, expect_tol))
    return result


def check_idempotent_table(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    form_names = check.params["forms"].split()
    simplex_names = check.params["simplices"].split()
    for i, fname in enumerate(form_names):
        for j, sname in enumerate(simplex_names):
            value, _ = period(scenario.forms[fname], scenario.simplices[sname])
            result.detail("%s@%s" % (fname, sname), value)
            expected = Fraction(1 if i == j else 0)
            if value != expected:
                result.fail("table entry (%s, %s) = %s, expected %s" % (fname, sname, value, expected))
    return result


def check_tau_witness(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    n = int(check.params["dim"])
    alpha = parse_poly_form(check.params["alpha"], n)
    beta = parse_poly_form(check.params["beta"], n)
    lhs = to_cochain(wedge_simplex(alpha, beta), order=settings.quad_order)
    rhs = aw_cup(
        to_cochain(alpha, order=settings.quad_order),
        to_cochain(beta, order=settings.quad_order),
    )
    witness = None
    for s in sorted(lhs.values):
        if lhs.values[s] != rhs.values[s]:
            witness = s
            break
    if witness is None:
        result.fail("no inequality witness; integration looked multiplicative")
    else:
        result.detail("witness_simplex", witness)
        result.detail("wedge_then_integrate", lhs.values[witness])
        result.detail("integrate_then_cup", rhs.values[witness])
    return result


def check_tau_chain_map(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 30))
    max_dim = int(check.params.get("max_dim", 3))
    for _ in range(count):
        n = rng.randint(1, max_dim)
        degree = rng.randint(0, n - 1)
        alpha = _random_poly_form(rng, n, degree, 3)
        if to_cochain(d_simplex(alpha)) != coboundary(to_cochain(alpha)):
            result.fail("integration map failed to be a chain map")
            break
    result.detail("count", count)
    return result


def check_tau_cohomology(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    K = named_complex(check.params["complex"])
    cutoff = settings.max_weight or int(check.params.get("max_weight", 3))
    fc = FamilyComplex(K, cutoff)
    prev = FamilyComplex(K, cutoff - 1) if cutoff > 1 else None
    stabilized = prev is not None and all(
        fc.cohomology_dimension(q) == prev.cohomology_dimension(q)
        for q in range(K.dimension + 1)
    )
    result.detail("max_weight", cutoff)
    result.detail("stabilized", stabilized)
    simplicial = {}
    for q in range(K.dimension + 1):
        sc = simplicial_cohomology(K, q)
        simplicial[q] = sc
        dim_forms = fc.cohomology_dimension(q)
        result.detail("dim_forms_%d" % q, dim_forms)
        result.detail("dim_simplicial_%d" % q, sc.dimension)
        if dim_forms != sc.dimension:
            result.fail("degree %d: %d != %d" % (q, dim_forms, sc.dimension))
    if result.status == "fail":
        return result
    # the integration map must induce an isomorphism degree by degree
    reps = {q: fc.representatives(q) for q in range(K.dimension + 1)}
    for q, sc in simplicial.items():
        if sc.dimension == 0:
            continue
        rows = []
        for family in reps[q]:
            coords, _ = sc.class_of(family.to_cochain())
            rows.append(coords)
        matrix = SparseMatrix.from_rows(rows)
        _, _, rank = kernel_image(matrix)
        result.detail("rank_%d" % q, rank)
        if rank != sc.dimension:
            result.fail("degree %d: induced map is not an isomorphism" % q)
    # multiplicativity on all products of computed classes
    products = 0
    for q1, fam1 in reps.items():
        for q2, fam2 in reps.items():
            if q1 + q2 > K.dimension:
                continue
            sc = simplicial[q1 + q2]
            for F in fam1:
                for G in fam2:
                    lhs_coords, _ = sc.class_of(F.wedge(G).to_cochain())
                    rhs_coords, _ = sc.class_of(
                        singular_aw_cup(F.to_cochain(), G.to_cochain())
                    )
                    products += 1
                    if lhs_coords != rhs_coords:
                        result.fail(
                            "class of wedge != cup of classes in degrees (%d, %d)"
                            % (q1, q2)
                        )
    result.detail("products_checked", products)
    return result


def check_aw_laws(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    K = named_complex(check.params.get("complex", "delta3"))
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 30))
    top = K.dimension
    one = unit_cochain(K)
    for _ in range(count):
        p = rng.randint(0, max(0, top - 1))
        q = rng.randint(0, max(0, top - p - 1))
        r = rng.randint(0, max(0, top - p - q))
        a = _random_cochain(rng, K, p)
        b = _random_cochain(rng, K, q)
        c = _random_cochain(rng, K, r)
        if aw_cup(aw_cup(a, b), c) != aw_cup(a, aw_cup(b, c)):
            result.fail("associativity failed")
            break
        if aw_cup(one, a) != a or aw_cup(a, one) != a:
            result.fail("unit law failed")
            break
        lhs = coboundary(aw_cup(a, b))
        rhs = aw_cup(coboundary(a), b) + aw_cup(a, coboundary(b)).scale((-1) ** p)
        if lhs != rhs:
            result.fail("Leibniz failed")
            break
    result.detail("count", count)
    witness = _noncommutative_witness(K)
    if witness is None:
        result.fail("no non-commutativity witness found")
    else:
        s1, s2, top_simplex = witness
        result.detail("witness_a", "indicator %s" % (s1,))
        result.detail("witness_b", "indicator %s" % (s2,))
        result.detail("witness_simplex", top_simplex)
    return result


def _noncommutative_witness(K):
    """Search small indicator cochains with a u b != +-(b u a)."""
    for p in range(K.dimension + 1):
        for q in range(K.dimension + 1 - p):
            for s1 in K.n_simplices(p):
                for s2 in K.n_simplices(q):
                    a = Cochain(K, p, {s1: Fraction(1)})
                    b = Cochain(K, q, {s2: Fraction(1)})
                    ab = aw_cup(a, b)
                    ba = aw_cup(b, a)
                    if ab != ba and ab != ba.scale(-1):
                        for s in K.n_simplices(p + q):
                            if ab.values[s] != ba.values[s]:
                                return s1, s2, s
    return None


def check_extension(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    K = named_complex(check.params["complex"])
    n = K.dimension + 1
    from .simplicial import standard_simplex

    full = standard_simplex(n)
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 20))
    max_coeff_degree = int(check.params.get("max_coeff_degree", 2))
    for _ in range(count):
        q = rng.randint(0, n - 1)
        source = _random_poly_form(rng, n, q, max_coeff_degree)
        family = FormsFamily.restricted_to(FormsFamily.from_top_form(full, source), K)
        extended = extend_from_boundary(family)
        for i in range(n + 1):
            restricted = pullback_delta(DeltaMorphism.face(n, i), extended)
            facet = tuple(v for v in range(n + 1) if v != i)
            if restricted != family.assignment[facet]:
                result.fail("extension does not restrict to facet %d" % i)
                break
        if result.status == "fail":
            break
    result.detail("count", count)
    result.detail("dimension", n)
    return result


def check_simplicial_cohomology(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    K = named_complex(check.params["complex"])
    expected = [int(d) for d in check.params["dims"].split()]
    for q, expect in enumerate(expected):
        got = simplicial_cohomology(K, q).dimension
        result.detail("h%d" % q, got)
        if got != expect:
            result.fail("H^%d has dimension %d, expected %d" % (q, got, expect))
    return result


def check_coboundary_pairing(scenario, check, settings):
    result = CheckResult(check.name, check.kind)
    complex_name = check.params["complex"]
    if not complex_name.startswith("boundary"):
        raise ValidationError("coboundary_pairing needs a boundary complex")
    n = int(complex_name[len("boundary") :])
    cycle = fundamental_boundary_cycle(n)
    K = cycle.complex
    rng = random.Random(check_rng_seed(settings.seed, check.name))
    count = int(check.params.get("count", 20))
    for _ in range(count):
        c = _random_cochain(rng, K, n - 2)
        if pair(coboundary(c), cycle) != 0:
            result.fail("coboundary paired nonzero against a cycle")
            break
    result.detail("count", count)
    result.detail("cycle_degree", n - 1)
    return result


CHECK_KINDS = {
    "validate": check_validate,
    "cohomology": check_cohomology,
    "poincare": check_poincare,
    "chain_map": check_chain_map,
    "chain_map_random": check_chain_map_random,
    "naturality_random": check_naturality_random,
    "pairing": check_pairing,
    "multiplicativity": check_multiplicativity,
    "idempotent_table": check_idempotent_table,
    "tau_witness": check_tau_witness,
    "tau_chain_map": check_tau_chain_map,
    "tau_cohomology": check_tau_cohomology,
    "aw_laws": check_aw_laws,
    "extension": check_extension,
    "simplicial_cohomology": check_simplicial_cohomology,
    "coboundary_pairing": check_coboundary_pairing,
}


def run_check(scenario, check, settings):
    if check.kind not in CHECK_KINDS:
        raise ValidationError("check %s has unknown kind %r" % (check.name, check.kind))
    try:
        return CHECK_KINDS[check.kind](scenario, check, settings)
    except RhamcheckError as exc:
        result = CheckResult(check.name, check.kind)
        result.fail("%s: %s" % (type(exc).__name__, exc))
        return result


def run_scenario_checks(scenario, settings, check_filter=None):
    """Run every check, honoring the filter with explicit skip records."""
    results = []
    for check in scenario.checks:
        if check_filter and check.name not in check_filter and check.kind not in check_filter:
            result = CheckResult(check.name, check.kind)
            result.skip("filtered out by --check")
            results.append(result)
            continue
        results.append(run_check(scenario, check, settings))
    return results
