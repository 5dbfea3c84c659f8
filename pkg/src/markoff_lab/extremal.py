"""The extremal numbers ξₘ: zigzag matrices, enclosures, conjugates, approximants and balancing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

import gmpy2
from mpmath import iv, libmp, mp

from markoff_lab.config import BAND_HI, BAND_LO, GAMMA_BITS, IV_PRECISION
from markoff_lab.contfrac import prefix_interval
from markoff_lab.errors import MethodDisagreement, PrecisionExhausted, SignChange
from markoff_lab.exactnum import (
    IDENTITY,
    J,
    M,
    Mat2,
    QuadIrr,
    RatInterval,
    moebius_apply,
    quadirr_height,
    quadirr_make,
)
from markoff_lab.markoff import (
    CohnMatrix,
    MarkoffTriple,
    Side,
    TripleLike,
    as_triple,
    child,
    cohn_matrix,
    markoff_alpha,
    maximal_zigzag,
)
from markoff_lab.words import Word, xi_prefixes, xi_word_stream


@dataclass(frozen=True)
class ExtremalSpec:
    """The GL₂(ℤ)-translate g·ξₘ of the extremal number of a tree node."""

    triple: MarkoffTriple
    moebius: Mat2 = IDENTITY

    def digits(self, n: int) -> Word:
        """Partial quotients of the untranslated ξₘ."""
        return xi_word_stream(self.triple, n)

    def translate(self, g: Mat2) -> "ExtremalSpec":
        return ExtremalSpec(self.triple, (g @ self.moebius).canonical_sign())

    def to_json(self) -> Dict[str, Any]:
        return {"triple": list(self.triple.as_tuple()), "moebius": self.moebius.rows()}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "ExtremalSpec":
        return cls(as_triple(payload["triple"]), Mat2.from_rows(payload["moebius"]))


@dataclass(frozen=True)
class ConjugatePair:
    """Enclosures of ξ′ = N·ξ and ξ″ = N⁻¹·ξ with their matrices."""

    xi: RatInterval
    prime: RatInterval
    double_prime: RatInterval
    prime_matrix: Mat2
    double_prime_matrix: Mat2


def conjugate_translation(twist: Mat2 = M) -> Mat2:
    """N = (b a; −d −c) for the twist (a b; c d)."""
    return Mat2(twist.b, twist.a, -twist.d, -twist.c)


def _first_step(t: TripleLike) -> Side:
    return maximal_zigzag(t, 2)[1].path[-1]


def iter_zigzag_matrices(t: TripleLike) -> Iterator[Tuple[MarkoffTriple, CohnMatrix]]:
    """x along the maximal zigzag, by x_{i+2} = x_{i+1}·M·x_i (left step) or x_{i+1}·ᵗM·x_i."""
    first, second = maximal_zigzag(t, 2)
    x_prev, x = cohn_matrix(first), cohn_matrix(second)
    yield first, x_prev
    yield second, x
    node = second
    while True:
        step = node.path[-1]
        following = child(node, step.other())
        twist = M if step is Side.LEFT else M.transpose()
        product = x.to_mat2() @ twist @ x_prev.to_mat2()
        if not product.is_symmetric() or product.a != following.m or product.det() != 1:
            logging.error("zigzag recurrence disagrees with the tree at path %s", following.path_string())
            raise MethodDisagreement(f"recurrence and tree disagree at path {following.path_string()}")
        x_prev, x = x, CohnMatrix.from_mat2(product)
        logging.debug("zigzag step %d (%s)", len(following.path), step.other().value)
        yield following, x
        node = following


def zigzag_matrices(t: TripleLike, n: int) -> List[CohnMatrix]:
    if n < 1:
        raise ValueError("a zigzag has at least one node")
    matrices = []
    for _, x in iter_zigzag_matrices(t):
        matrices.append(x)
        if len(matrices) == n:
            return matrices
    raise AssertionError("unreachable")


def ratio_bracket(x: CohnMatrix) -> RatInterval:
    """Every number whose expansion starts with Πₘ lies between (3k−ℓ)/(3m−k) and (4k−ℓ)/(4m−k)."""
    return RatInterval.hull(
        Fraction(3 * x.k - x.l, 3 * x.m - x.k),
        Fraction(4 * x.k - x.l, 4 * x.m - x.k),
    )


def xi_enclosure(t: TripleLike, target_width: Fraction, max_steps: int = 64) -> RatInterval:
    """Intersects the matrix brackets with the digit-stream prefix intervals until narrow enough."""
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target width must be positive")
    parity = 0 if _first_step(t) is Side.RIGHT else 1
    prefixes = xi_prefixes(t)
    for j, (node, x) in enumerate(iter_zigzag_matrices(t)):
        if j > max_steps:
            break
        if j % 2 != parity:
            continue
        matrix_box = ratio_bracket(x)
        word_box = prefix_interval(next(prefixes).expand(), 0)
        common = matrix_box.intersect(word_box)
        if common is None:
            logging.error(f"{node}: bracket {matrix_box} misses digit interval {word_box}")
            raise MethodDisagreement(f"the two enclosures of ξ{as_triple(t)} are disjoint")
        if common.width() <= target_width:
            logging.debug(f"ξ{as_triple(t)} enclosed at zigzag step {j}")
            return common
    raise PrecisionExhausted(f"width {target_width} not reached within {max_steps} zigzag steps")


def xi_conjugates(t: TripleLike, target_width: Fraction) -> ConjugatePair:
    xi = xi_enclosure(t, target_width)
    N = conjugate_translation(M)
    N_inv = N.inverse()
    return ConjugatePair(xi, moebius_apply(N, xi), moebius_apply(N_inv, xi), N, N_inv)


def associated_form_min(t: TripleLike, box: int, precision: Fraction) -> RatInterval:
    """min |(T − ξU)(T − (ξ+3)U)| over nonzero points of the box, certified on an enclosure of ξ."""
    if box < 1:
        raise ValueError("the box needs B ≥ 1")
    xi = xi_enclosure(t, precision)
    shifted = xi + 3
    # u = 0 contributes G(0, ±1) = 1
    low, high = Fraction(1), Fraction(1)
    for u in range(1, box + 1):
        candidates = {-box, box}
        for root in (xi * u, shifted * u):
            first = root.lo.numerator // root.lo.denominator
            last = -((-root.hi.numerator) // root.hi.denominator)
            candidates.update(range(max(first, -box), min(last, box) + 1))
        for t_value in candidates:
            value = abs((t_value - xi * u) * (t_value - shifted * u))
            low, high = min(low, value.lo), min(high, value.hi)
    return RatInterval(low, high)


def _zigzag_parity(t: TripleLike) -> int:
    """r = 1 when m^(2) is the right successor of m^(1), else 0."""
    return 1 if _first_step(t) is Side.RIGHT else 0


def _determinant_approx(t: TripleLike, i: int) -> QuadIrr:
    """Root nearest ξ of det(U² UT T²; x_{i+1}; x_{i+2}), read off tr((U² UT; UT T²)·J·x_{i+2}·J·x_{i+1}·J)."""
    xs = zigzag_matrices(t, i + 2)
    P = J @ xs[i + 1].to_mat2() @ J @ xs[i].to_mat2() @ J
    A, B, C = P.d, P.b + P.c, P.a
    g = int(gmpy2.gcd(gmpy2.gcd(A, B), C))
    A, B, C = A // g, B // g, C // g
    roots = [quadirr_make(-B, sign, B * B - 4 * A * C, 2 * A) for sign in (1, -1)]
    xi = xi_enclosure(t, Fraction(1, 100))
    near = [root for root in roots if abs(root.enclosure(32) - xi.midpoint()).hi < 1]
    if len(near) != 1:
        raise MethodDisagreement(f"no unique root of {A}T²+{B}T+{C} near ξ")
    return near[0]


def best_approx(t: TripleLike, i: int, check: bool = True) -> QuadIrr:
    """αᵢ = α of the i-th zigzag node when i ≡ r (mod 2), otherwise its conjugate plus 3."""
    if i < 1:
        raise ValueError("approximants are indexed from 1")
    node = maximal_zigzag(t, i)[-1]
    alpha, alpha_bar = markoff_alpha(node)
    result = alpha if i % 2 == _zigzag_parity(t) else alpha_bar + 3
    if check:
        other = _determinant_approx(t, i)
        if other != result:
            logging.error(f"α_{i} of {as_triple(t)}: closed form {result}, determinant form {other}")
            raise MethodDisagreement(f"the two constructions of α_{i} disagree")
    return result


def gamma_interval(bits: int = GAMMA_BITS) -> RatInterval:
    """(1 + √5)/2 from the integer square root of 5·4^bits."""
    root = int(gmpy2.isqrt(5 << (2 * bits)))
    scale = Fraction(1, 1 << bits)
    return RatInterval((1 + root * scale) / 2, (1 + (root + 1) * scale) / 2)


def _to_iv(x: RatInterval) -> Any:
    lo = libmp.from_rational(x.lo.numerator, x.lo.denominator, IV_PRECISION, libmp.round_floor)
    hi = libmp.from_rational(x.hi.numerator, x.hi.denominator, IV_PRECISION, libmp.round_ceiling)
    return iv.mpf([mp.make_mpf(lo), mp.make_mpf(hi)])


def _from_iv(x: Any) -> RatInterval:
    lo, hi = x._mpi_
    return RatInterval(Fraction(*libmp.to_rational(lo)), Fraction(*libmp.to_rational(hi)))


def _scaled_power(factor: RatInterval, base: int, exponent: RatInterval) -> RatInterval:
    """factor · base^exponent as a certified interval."""
    iv.prec = IV_PRECISION
    power = iv.exp(_to_iv(exponent) * iv.log(_to_iv(RatInterval.point(base))))
    return _from_iv(_to_iv(factor) * power)


def in_band(value: RatInterval, band: Tuple[Fraction, Fraction] = (BAND_LO, BAND_HI)) -> bool:
    return band[0] <= value.lo and value.hi <= band[1]


@dataclass(frozen=True)
class DiagnosticRow:
    """Certified ratios for one approximant; offset is the shift s with ᾱᵢ → ξ + s."""

    i: int
    height: int
    offset: int
    approximation: RatInterval
    conjugate: RatInterval
    mixed: RatInterval
    growth: Optional[RatInterval] = None
    in_band: bool = field(default=False)


def approx_diagnostics(
    t: TripleLike,
    i_range: Iterable[int],
    band: Tuple[Fraction, Fraction] = (BAND_LO, BAND_HI),
) -> List[DiagnosticRow]:
    indices = sorted(set(i_range))
    if not indices or indices[0] < 1:
        raise ValueError("diagnostics need approximant indices ≥ 1")
    alphas = {i: best_approx(t, i, check=False) for i in indices + [indices[-1] + 1]}
    heights = {i: quadirr_height(a) for i, a in alphas.items()}
    largest = max(heights.values())
    width = Fraction(1, largest**8 * 10**6)
    bits = width.denominator.bit_length() + 8
    xi = xi_enclosure(t, width)
    delta = 3 if _zigzag_parity(t) == 0 else -3
    gamma = gamma_interval()
    exponent_near = 2 * gamma + 2
    exponent_mixed = 2 * gamma + 4
    rows = []
    for i in indices:
        alpha, H = alphas[i], heights[i]
        alpha_bar = alpha.conjugate()
        bar_box = alpha_bar.enclosure(bits)
        offset = min((3, -3), key=lambda s: abs(bar_box.midpoint() - xi.midpoint() - s))
        near = abs(xi - alpha.enclosure(bits))
        conj = abs(xi + offset - bar_box)
        mixed_alpha = alpha if i % 2 else alpha_bar + delta
        mixed = abs(xi - mixed_alpha.enclosure(bits)) * abs(
            xi + delta - mixed_alpha.conjugate().enclosure(bits)
        )
        growth = None
        if i + 1 in heights:
            growth = _scaled_power(RatInterval.point(heights[i + 1]), H, -gamma)
        row = DiagnosticRow(
            i,
            H,
            offset,
            _scaled_power(near, H, exponent_near),
            conj * (H * H),
            _scaled_power(mixed, quadirr_height(mixed_alpha), exponent_mixed),
            growth,
        )
        checked = [row.approximation, row.conjugate, row.mixed] + ([growth] if growth else [])
        rows.append(replace(row, in_band=all(in_band(v, band) for v in checked)))
        logging.debug(f"diagnostics row {i}: H={H}, offset {offset:+d}")
    return rows


@dataclass(frozen=True)
class WitnessRow:
    X: int
    row: Tuple[int, int, int]
    product: RatInterval


def extremality_witness(t: TripleLike, X_list: Iterable[int]) -> List[WitnessRow]:
    """max(|x₀ξ − x₁|, |x₀ξ² − x₂|)·X^{1/γ} for the best zigzag row with x₀ ≤ X."""
    X_values = sorted(set(int(X) for X in X_list))
    if not X_values or X_values[0] < 1:
        raise ValueError("X values must be ≥ 1")
    limit = X_values[-1]
    rows: List[Tuple[int, int, int]] = []
    for _, x in iter_zigzag_matrices(t):
        if x.m > limit:
            break
        rows.append(x.row())
    xi = xi_enclosure(t, Fraction(1, limit**4 * 10**6))
    xi_squared = xi * xi
    fallback = (1, round(xi.midpoint()), round(xi_squared.midpoint()))
    exponent = gamma_interval() - 1
    report = []
    for X in X_values:
        best: Optional[Tuple[RatInterval, Tuple[int, int, int]]] = None
        for row in [fallback] + [r for r in rows if r[0] <= X]:
            x0, x1, x2 = row
            gaps = (abs(xi * x0 - x1), abs(xi_squared * x0 - x2))
            error = RatInterval(max(g.lo for g in gaps), max(g.hi for g in gaps))
            if best is None or error.hi < best[0].hi:
                best = (error, row)
        report.append(WitnessRow(X, best[1], _scaled_power(best[0], X, exponent)))
    return report


def _strictly_below(x: RatInterval, bound: int) -> bool:
    if x.hi < bound:
        return True
    if x.lo >= bound:
        return False
    raise PrecisionExhausted(f"[{float(x.lo)}, {float(x.hi)}] straddles {bound}")


def _images(g: Mat2, xi: RatInterval) -> Tuple[RatInterval, RatInterval, RatInterval]:
    try:
        return moebius_apply(g, xi), moebius_apply(g, xi + 3), moebius_apply(g, xi - 3)
    except SignChange as e:
        raise PrecisionExhausted(str(e)) from e


def reduce_and_balance(spec: ExtremalSpec, precision: Fraction, max_steps: int = 256) -> ExtremalSpec:
    """Forward digit shifts until reduced, then backward steps until the conjugates' floors differ."""
    xi = xi_enclosure(spec.triple, precision)
    g = spec.moebius
    value, _, _ = _images(g, xi)
    g = Mat2(1, -value.floor(), 0, 1) @ g
    for _ in range(max_steps):
        value, c1, c2 = _images(g, xi)
        if _strictly_below(c1, -1) and _strictly_below(c2, -1):
            break
        try:
            a = value.reciprocal().floor()
        except SignChange as e:
            raise PrecisionExhausted(str(e)) from e
        g = Mat2(-a, 1, 1, 0) @ g
    else:
        raise PrecisionExhausted(f"{spec.triple}: not reduced after {max_steps} shifts")
    for _ in range(max_steps):
        _, c1, c2 = _images(g, xi)
        lead, other = (-c1).floor(), (-c2).floor()
        if lead != other:
            logging.debug(f"{spec.triple}: balanced with conjugate floors {lead}, {other}")
            return ExtremalSpec(spec.triple, g.canonical_sign())
        g = Mat2(0, 1, 1, lead) @ g
    raise PrecisionExhausted(f"{spec.triple}: conjugates agree on {max_steps} leading quotients")


def balance_with_retry(spec: ExtremalSpec, precision: Fraction, attempts: int = 4) -> ExtremalSpec:
    """reduce_and_balance, squaring the precision after each PrecisionExhausted."""
    for attempt in range(attempts):
        try:
            return reduce_and_balance(spec, precision)
        except PrecisionExhausted as e:
            logging.info(f"balancing {spec.triple} at {float(precision):.3g} failed ({e}); refining")
            precision = precision * precision
    raise PrecisionExhausted(f"{spec.triple}: balancing failed after {attempts} refinements")


def spec_enclosures(spec: ExtremalSpec, precision: Fraction) -> Tuple[RatInterval, RatInterval, RatInterval]:
    """Enclosures of g·ξ, g·ξ′ and g·ξ″."""
    return _images(spec.moebius, xi_enclosure(spec.triple, precision))
