"""Named verification suites. Every check carries the anchor of the statement it certifies."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from markoff_lab.config import BAND_HI, BAND_LO, DEFAULT_BOX
from markoff_lab.contfrac import enclosure_digits, is_reduced_quad, quad_cf_expand, reversed_period_matches
from markoff_lab.errors import MarkoffLabError, UnknownSuite
from markoff_lab.exactnum import M, Mat2, quadirr_make
from markoff_lab.extremal import (
    ExtremalSpec,
    approx_diagnostics,
    associated_form_min,
    balance_with_retry,
    best_approx,
    extremality_witness,
    in_band,
    spec_enclosures,
    xi_enclosure,
    zigzag_matrices,
)
from markoff_lab.markoff import (
    CohnMatrix,
    MarkoffTriple,
    as_triple,
    enumerate_cohn_tree,
    enumerate_tree,
    fricke_check,
    is_markoff,
    locate,
    markoff_alpha,
    markoff_form,
    markoff_value_check,
    maximal_zigzag,
    offdiag_congruence,
    pairwise_coprime,
    zigzag_growth_ok,
)
from markoff_lab.spectrum import (
    L_periodic,
    L_window_sup,
    critical_window,
    mu_bruteforce,
    mu_exact,
    nu_quadratic,
    nu_sequence,
)
from markoff_lab.words import cube_prefixes, palindrome_factor, phi, pi_word, psi_for_triple, xi_word_stream

ONE_THIRD = Fraction(1, 3)
PRECISION = Fraction(1, 10**60)
# failing witnesses kept per check
WITNESS_LIMIT = 5


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    status: str
    witness: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class SuiteReport:
    """Checks of one suite run, sorted by id, with pass/fail totals."""

    suite: str
    depth: int
    checks: List[Check]
    totals: Dict[str, int]

    @property
    def passed(self) -> bool:
        return self.totals["failed"] == 0


def _check(check_id: str, anchor: str, passed: bool, **witness: Any) -> Check:
    return Check(check_id, anchor, "pass" if passed else "fail", witness)


def _failures(items: List[Any]) -> List[Any]:
    return items[:WITNESS_LIMIT]


def _tag(t: Any) -> str:
    return str(as_triple(t))


def _tree_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    nodes = enumerate_tree(depth, include_extended_root=True)
    not_markoff = [n for n in nodes if not is_markoff(n)]
    unordered = [n for n in nodes if n.m <= max(n.m1, n.m2)]
    shared = [n for n in nodes if not pairwise_coprime(n)]
    misplaced = [n for n in nodes if locate(n.as_tuple()).path != n.path]
    return [
        _check("tree.equation", "markoff-equation", not not_markoff, nodes=len(nodes), failures=_failures(not_markoff)),
        _check("tree.ordering", "tree-ordering", not unordered, failures=_failures(unordered)),
        _check("tree.coprime", "tree-coprimality", not shared, failures=_failures(shared)),
        _check("tree.paths", "tree-paths", not misplaced, failures=_failures(misplaced)),
    ]


def _corrupted(node: MarkoffTriple, x: CohnMatrix, overrides: Dict[str, Any]) -> CohnMatrix:
    corrupt = overrides.get("corrupt")
    if corrupt and list(node.as_tuple()) == list(corrupt["triple"]):
        logging.info(f"using the corrupted matrix {corrupt['matrix']} for {node}")
        return CohnMatrix(*corrupt["matrix"])
    return x


def _cohn_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    broken, mismatched, unlifted = [], [], []
    count = 0
    for node, (x, x1, x2) in enumerate_cohn_tree(depth):
        x = _corrupted(node, x, overrides)
        count += 1
        if x.violations():
            broken.append({"triple": node, "matrix": x, "violations": x.violations()})
        if (x.m, x1.m, x2.m) != node.as_tuple():
            mismatched.append({"triple": node, "matrix": x})
        if x1.to_mat2() @ M @ x2.to_mat2() != x.to_mat2():
            unlifted.append({"triple": node, "matrix": x})
    return [
        _check("cohn.constraints", "cohn-bounds", not broken, matrices=count, failures=_failures(broken)),
        _check("cohn.corners", "cohn-lift", not mismatched, failures=_failures(mismatched)),
        _check("cohn.product", "cohn-product", not unlifted, failures=_failures(unlifted)),
    ]


def _congruence_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    failures = []
    count = 0
    for node, (x, _, _) in enumerate_cohn_tree(depth):
        x = _corrupted(node, x, overrides)
        count += 1
        k = offdiag_congruence(node)
        if k != x.k:
            failures.append({"triple": node, "congruence": k, "matrix": x})
    return [_check("congruence.offdiag", "offdiag-congruence", not failures, nodes=count, failures=_failures(failures))]


def _fricke_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    steps = int(overrides.get("steps", 20))
    starts = enumerate_tree(min(depth, 5), include_extended_root=True)[:10]
    integer_failures, matrix_failures, slow = [], [], []
    for start in starts:
        values = [n.m for n in maximal_zigzag(start, steps + 2)]
        matrices = zigzag_matrices(start, steps + 2)
        for j in range(steps):
            if not fricke_check(values[j : j + 3]):
                integer_failures.append({"start": start, "index": j})
            if not fricke_check(matrices[j : j + 3]):
                matrix_failures.append({"start": start, "index": j})
        if not zigzag_growth_ok(values):
            slow.append(start)
    return [
        _check("fricke.matrices", "fricke-trace-identity", not matrix_failures, starts=len(starts), steps=steps, failures=_failures(matrix_failures)),
        _check("fricke.traces", "fricke-trace-identity", not integer_failures, failures=_failures(integer_failures)),
        _check("fricke.growth", "zigzag-growth", not slow, failures=_failures(slow)),
    ]


def _words_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    wrong_law, unfactored = [], []
    for node, (x, _, _) in enumerate_cohn_tree(min(depth, 8)):
        word = pi_word(node)
        if phi(word) != x.to_mat2() @ M:
            wrong_law.append({"triple": node, "word": word})
        try:
            palindrome_factor(psi_for_triple(node))
        except MarkoffLabError as e:
            unfactored.append({"triple": node, "error": str(e)})
    return [
        _check("words.law", "word-law", not wrong_law, failures=_failures(wrong_law)),
        _check("words.palindrome", "palindrome-factorization", not unfactored, failures=_failures(unfactored)),
    ]


def _periods_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    wrong_stream, unreduced, unmirrored = [], [], []
    for node in enumerate_tree(min(depth, 8)):
        alpha, _ = markoff_alpha(node)
        word = pi_word(node)
        expansion = quad_cf_expand(alpha)
        if expansion.a0 != 0 or expansion.stream(3 * len(word)) != word * 3:
            wrong_stream.append({"triple": node, "expansion": str(expansion)})
        if not is_reduced_quad(alpha):
            unreduced.append(node)
        if not reversed_period_matches(alpha):
            unmirrored.append(node)
    return [
        _check("periods.stream", "period-law", not wrong_stream, failures=_failures(wrong_stream)),
        _check("periods.reduced", "reduced-alpha", not unreduced, failures=_failures(unreduced)),
        _check("periods.reversal", "galois-reversal", not unmirrored, failures=_failures(unmirrored)),
    ]


def _mu_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    box = int(overrides.get("box", DEFAULT_BOX))
    wrong_mu, wrong_value, oracle = [], [], []
    for node in enumerate_tree(depth, include_extended_root=True):
        F = markoff_form(node)
        mu = mu_exact(F)
        if mu != node.m:
            wrong_mu.append({"triple": node, "mu": mu})
        if not markoff_value_check(node, mu, F):
            wrong_value.append(node)
        brute = mu_bruteforce(F, box)
        if brute != mu:
            oracle.append({"triple": node, "mu": mu, "bruteforce": brute})
    return [
        _check("mu.exact", "markoff-minimum", not wrong_mu, failures=_failures(wrong_mu)),
        _check("mu.value", "markoff-value", not wrong_value, failures=_failures(wrong_value)),
        _check("mu.oracle", "reduction-cycle-oracle", not oracle, box=box, failures=_failures(oracle)),
    ]


def _nu_quadratic_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    unreciprocal, wrong_nu = [], []
    for node in enumerate_tree(depth, include_extended_root=True):
        L, _ = L_periodic(pi_word(node))
        alpha, _ = markoff_alpha(node)
        nu = nu_quadratic(alpha)
        if L * nu != 1:
            unreciprocal.append(node)
        disc = 9 * node.m * node.m - 4
        if nu != quadirr_make(0, node.m, disc, disc):
            wrong_nu.append({"triple": node, "nu": nu})
    return [
        _check("nu-quadratic.reciprocity", "lagrange-reciprocity", not unreciprocal, failures=_failures(unreciprocal)),
        _check("nu-quadratic.value", "markoff-constant", not wrong_nu, failures=_failures(wrong_nu)),
    ]


def _xi_dual_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    steps = int(overrides.get("steps", 14))
    failures, widths = [], {}
    for node in enumerate_tree(depth, include_extended_root=True)[:10]:
        try:
            enclosure = xi_enclosure(node, PRECISION, max_steps=steps)
        except MarkoffLabError as e:
            failures.append({"triple": node, "error": str(e)})
            continue
        widths[str(node)] = enclosure.width()
        if not (Fraction(1, 2) < enclosure.lo and enclosure.hi < 1):
            failures.append({"triple": node, "enclosure": enclosure})
    return [_check("xi-dual.agreement", "dual-construction", not failures, steps=steps, widths=widths, failures=_failures(failures))]


def _nu_band(digits: Any, skip: int = 0) -> Dict[str, Any]:
    """Running minimum of q_k‖q_kξ‖ over k ≥ skip, on the convergents of the whole stream."""
    sequence = nu_sequence(digits)
    tail = [v for k, v in zip(sequence.indices, sequence.values) if k >= skip]
    final = min(v.hi for v in tail)
    close = sum(1 for v in tail if abs(v.midpoint() - ONE_THIRD) < Fraction(1, 1000))
    passed = ONE_THIRD - Fraction(1, 100) < final < ONE_THIRD + Fraction(1, 50) and close >= 5
    return {"passed": passed, "running_min": final, "near_one_third": close}


def _xi_nu_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    count = int(overrides.get("digits", 300))
    checks = []
    for t in ((5, 1, 2), (2, 1, 1)):
        band = _nu_band(xi_word_stream(t, count))
        checks.append(_check(f"xi-nu.lagrange{_tag(t)}", "lagrange-constant-xi", band.pop("passed"), **band))

        spec = balance_with_retry(ExtremalSpec(as_triple(t)), PRECISION)
        _, c1, c2 = spec_enclosures(spec, Fraction(1, 10**400))
        for name, conjugate in (("prime", c1), ("double-prime", c2)):
            _, digits = enclosure_digits(-conjugate, count)
            band = _nu_band(digits, skip=20)
            band.pop("passed")
            final = band["running_min"]
            checks.append(_check(
                f"xi-nu.conjugate-{name}{_tag(t)}",
                "lagrange-constant-conjugates",
                ONE_THIRD - Fraction(1, 100) < final < ONE_THIRD + Fraction(1, 50),
                digits=len(digits),
                **band,
            ))

    for junction in ("ab", "ba"):
        window = critical_window((5, 1, 2), count, junction)
        lower, rows = L_window_sup(window)
        high = [i for i, interval in rows if interval.hi > 3 + Fraction(1, 1000)]
        checks.append(_check(
            f"xi-nu.critical-{junction}",
            "critical-word",
            not high and lower > Fraction(299, 100),
            sup_lower_bound=lower,
            positions=len(rows),
            failures=_failures(high),
        ))
    return checks


def _g_min_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    box = int(overrides.get("box", DEFAULT_BOX))
    checks = []
    for node in enumerate_tree(depth, include_extended_root=True)[:5]:
        minimum = associated_form_min(node, box, PRECISION)
        checks.append(_check(
            f"g-min.minimum{node}",
            "associated-form-minimum",
            Fraction(99, 100) < minimum.lo and minimum.hi < Fraction(1001, 1000),
            box=box,
            minimum=minimum,
        ))
        xi = xi_enclosure(node, PRECISION)
        disc = (2 * xi + 3) * (2 * xi + 3) - 4 * xi * (xi + 3)
        checks.append(_check(f"g-min.disc{node}", "associated-form-discriminant", disc.contains(9), disc=disc))
    return checks


def _diagnostics_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    first, last = overrides.get("indices", [4, 12])
    band = tuple(Fraction(v) for v in overrides.get("band", (BAND_LO, BAND_HI)))
    t = (5, 1, 2)
    rows = approx_diagnostics(t, range(first, last + 1), band)
    odd = {row.offset for row in rows if row.i % 2}
    even = {row.offset for row in rows if not row.i % 2}
    witnesses = extremality_witness(t, [10**k for k in range(1, 11)])
    checks = [
        _check("diagnostics.bands", "approximation-exponent-bands", all(row.in_band for row in rows),
               coverage="sampled approximants", rows=rows),
        _check(
            "diagnostics.accumulation",
            "conjugate-accumulation",
            len(odd) == 1 and len(even) == 1 and odd != even,
            odd_offsets=sorted(odd),
            even_offsets=sorted(even),
        ),
        _check(
            "diagnostics.witness",
            "uniform-approximation-witness",
            all(in_band(w.product, band) for w in witnesses),
            band=list(band),
            rows=witnesses,
        ),
    ]
    top = int(overrides.get("approximants", 10))
    disagreements, low_nu = [], []
    for start in ((5, 1, 2), (2, 1, 1), (13, 1, 5)):
        nodes = maximal_zigzag(start, top)
        for i in range(1, top + 1):
            try:
                alpha = best_approx(start, i)
            except MarkoffLabError as e:
                disagreements.append({"triple": start, "i": i, "error": str(e)})
                continue
            nu = nu_quadratic(alpha)
            m = nodes[i - 1].m
            disc = 9 * m * m - 4
            if not nu > ONE_THIRD or nu != quadirr_make(0, m, disc, disc):
                low_nu.append({"triple": start, "i": i, "nu": nu})
    checks.append(_check("diagnostics.best-approx", "best-approximation-closed-form", not disagreements, failures=_failures(disagreements)))
    checks.append(_check("diagnostics.best-approx-nu", "best-approximation-lagrange", not low_nu, failures=_failures(low_nu)))
    return checks


def _balance_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    checks = []
    for node in enumerate_tree(depth, include_extended_root=True)[:5]:
        spec = ExtremalSpec(node)
        balanced = balance_with_retry(spec, PRECISION)
        value, c1, c2 = spec_enclosures(balanced, PRECISION)
        reduced = value.lo > 0 and value.hi < 1 and c1.hi < -1 and c2.hi < -1
        distinct = (-c1).floor() != (-c2).floor()
        checks.append(_check(f"balance.reduced{node}", "reduced-balanced", reduced and distinct, spec=balanced.to_json()))
        again = balance_with_retry(balanced, PRECISION)
        checks.append(_check(f"balance.idempotent{node}", "balance-idempotence", again == balanced))
        shifted = balance_with_retry(spec.translate(Mat2(1, 7, 0, 1)), PRECISION)
        mirrored = balance_with_retry(spec.translate(Mat2(-1, 1, 0, 1)), PRECISION)
        checks.append(_check(
            f"balance.unique{node}",
            "balanced-uniqueness",
            shifted == balanced and mirrored == balanced,
            shifted=shifted.to_json(),
            mirrored=mirrored.to_json(),
        ))
    return checks


def _cubes_suite(depth: int, overrides: Dict[str, Any]) -> List[Check]:
    short, extended = (int(n) for n in overrides.get("lengths", [300, 600]))
    t = (5, 1, 2)
    first = cube_prefixes(xi_word_stream(t, short))
    second = cube_prefixes(xi_word_stream(t, extended))
    return [_check("cubes.finite", "cube-prefix-finiteness", first == second, short=first, extended=second)]


SUITES: Dict[str, Callable[[int, Dict[str, Any]], List[Check]]] = {
    "tree": _tree_suite,
    "cohn": _cohn_suite,
    "congruence": _congruence_suite,
    "fricke": _fricke_suite,
    "words": _words_suite,
    "periods": _periods_suite,
    "mu": _mu_suite,
    "nu-quadratic": _nu_quadratic_suite,
    "xi-dual": _xi_dual_suite,
    "xi-nu": _xi_nu_suite,
    "g-min": _g_min_suite,
    "diagnostics": _diagnostics_suite,
    "balance": _balance_suite,
    "cubes": _cubes_suite,
}

SUITE_NAMES = sorted(SUITES) + ["all"]


def _guarded(name: str, depth: int, overrides: Dict[str, Any]) -> List[Check]:
    logging.info(f"Running suite: {name} (depth {depth})")
    try:
        return SUITES[name](depth, overrides)
    except MarkoffLabError as e:
        logging.error(f"suite {name} aborted: {e}")
        return [_check(f"{name}.aborted", "internal-consistency", False, error=f"{type(e).__name__}: {e}")]
    except (ArithmeticError, ValueError) as e:
        logging.exception(f"suite {name} crashed")
        return [_check(f"{name}.crashed", "internal-consistency", False, error=f"{type(e).__name__}: {e}")]


def run_suite(
    name: str,
    depth: int,
    overrides: Optional[Dict[str, Any]] = None,
    threads: int = 1,
) -> SuiteReport:
    overrides = overrides or {}
    if name == "all":
        names = sorted(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UnknownSuite(f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(lambda n: _guarded(n, depth, overrides), names))
    checks = sorted((c for batch in results for c in batch), key=lambda c: c.id)
    failed = sum(1 for c in checks if not c.passed)
    totals = {"checks": len(checks), "passed": len(checks) - failed, "failed": failed}
    for c in checks:
        if not c.passed:
            logging.error(f"check failed: {c.id} [{c.anchor}]")
    return SuiteReport(name, depth, checks, totals)
