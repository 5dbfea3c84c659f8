"""Minima of quadratic forms, L(A) of doubly infinite words and Lagrange constants."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import gmpy2

from markoff_lab.config import INTERIOR_MARGIN
from markoff_lab.contfrac import convergent_recurrence, periodic_value, prefix_interval, quad_cf_expand
from markoff_lab.errors import Degenerate, OutOfWindow, ZeroForm
from markoff_lab.exactnum import BinQuadForm, QuadIrr, RatInterval
from markoff_lab.markoff import TripleLike
from markoff_lab.words import W2Word, Word, xi_word_stream


@dataclass(frozen=True)
class WindowedBiWord:
    """A finite window a_0 ... a_{n-1} of a doubly infinite word.

    Position i (1 ≤ i ≤ n-1) is the junction between a_{i-1} and a_i.
    """

    digits: Word
    left_tail: str = "unknown"
    right_tail: str = "unknown"

    @classmethod
    def from_parts(cls, left: Word, right: Word, **tags: str) -> "WindowedBiWord":
        """left is read right-to-left from the junction: (a_{-1}, a_{-2}, ...)."""
        return cls(left.reversed() + right, **tags)

    def __len__(self) -> int:
        return len(self.digits)


def lambda_at(w: WindowedBiWord, i: int) -> RatInterval:
    """[0; a_i, a_{i+1}, ...] + [a_{i-1}; a_{i-2}, ...] over every continuation of the window."""
    letters = w.digits.letters
    if not 1 <= i <= len(letters) - 1:
        raise OutOfWindow(f"position {i} needs digits on both sides of a window of {len(letters)}")
    right = prefix_interval(letters[i:], 0)
    backwards = letters[:i][::-1]
    left = prefix_interval(backwards[1:], backwards[0])
    return right + left


def L_periodic(period: Word) -> Tuple[QuadIrr, RatInterval]:
    """Exact L of the purely periodic word ...ΠΠΠ... and a rational enclosure."""
    if not period:
        raise ValueError("empty period")
    letters = period.letters
    best: Optional[QuadIrr] = None
    for j in range(len(letters)):
        # right tail x = [0; rotated period]; the left tail is then −x̄
        x = periodic_value(Word(letters[j:] + letters[:j])).reciprocal()
        value = x - x.conjugate()
        if best is None or value.compare(best) > 0:
            best = value
    return best, best.enclosure(96)


def L_window_sup(
    w: WindowedBiWord, margin: int = INTERIOR_MARGIN
) -> Tuple[Fraction, List[Tuple[int, RatInterval]]]:
    """Certified lower bound for L from the interior positions, with every position's interval."""
    size = len(w)
    if size < 4:
        raise ValueError("a window needs at least four digits")
    margin = max(1, min(margin, (size - 1) // 2))
    rows = [(i, lambda_at(w, i)) for i in range(margin, size - margin + 1)]
    lower = max(interval.lo for _, interval in rows)
    logging.debug(f"window of {size}: {len(rows)} interior positions, sup lower bound {float(lower)}")
    return lower, rows


def critical_window(t: TripleLike, n: int, junction: str = "ab") -> WindowedBiWord:
    """P*·ab·P or P*·ba·P, where ξₘ = [0; a, P] and P keeps n digits."""
    stream = xi_word_stream(t, n + 2)
    if stream.letters[:2] != (1, 1):
        raise ValueError(f"digit stream of {t} does not start with a")
    tail = stream[2:]
    middle = W2Word(junction).expand()
    return WindowedBiWord(tail.reversed() + middle + tail, "truncated", "truncated")


def _integer_form(F: BinQuadForm) -> Tuple[int, int, int]:
    a, b, c = (int(v) for v in F.coefficients())
    if a == b == c == 0:
        raise ZeroForm("the zero form has no minimum")
    return a, b, c


def _is_reduced(a: int, b: int, root: int) -> bool:
    return 0 < b <= root and 2 * abs(a) + b > root and 2 * abs(a) - b <= root


def _rho(form: Tuple[int, int, int], disc: int, root: int) -> Tuple[int, int, int]:
    a, b, c = form
    span = 2 * abs(c)
    if abs(c) > root:
        b_next = (-b) % span
        if b_next > abs(c):
            b_next -= span
    else:
        b_next = root - (root + b) % span
    return (c, b_next, (b_next * b_next - disc) // (4 * c))


def reduction_cycle(F: BinQuadForm) -> List[Tuple[int, int, int]]:
    """The cycle of reduced forms equivalent to the primitive part of F."""
    a, b, c = _integer_form(F)
    g = int(gmpy2.gcd(gmpy2.gcd(a, b), c))
    form = (a // g, b // g, c // g)
    disc = form[1] * form[1] - 4 * form[0] * form[2]
    if disc < 0:
        raise ValueError(f"{F} is definite")
    if gmpy2.is_square(disc):
        raise Degenerate(f"disc {disc} is a square; {F} represents zero")
    root = int(gmpy2.isqrt(disc))
    while not _is_reduced(form[0], form[1], root):
        form = _rho(form, disc, root)
    cycle = [form]
    following = _rho(form, disc, root)
    while following != cycle[0]:
        cycle.append(following)
        following = _rho(following, disc, root)
    return cycle


def mu_exact(F: BinQuadForm) -> int:
    """min |F(x, y)| over nonzero integer points."""
    a, b, c = _integer_form(F)
    content = int(gmpy2.gcd(gmpy2.gcd(a, b), c))
    cycle = reduction_cycle(F)
    logging.debug("reduction cycle of length %d", len(cycle))
    return content * min(abs(form[0]) for form in cycle)


def mu_bruteforce(F: BinQuadForm, box: int) -> int:
    """min |F| over 0 < max(|x|, |y|) ≤ box; half the box suffices by symmetry."""
    a, b, c = _integer_form(F)
    best = None
    for u in range(0, box + 1):
        for t in range(-box, box + 1):
            if u == 0 and t <= 0:
                continue
            value = abs(a * t * t + b * t * u + c * u * u)
            if best is None or value < best:
                best = value
    return best


def nu_quadratic(x: QuadIrr) -> QuadIrr:
    """ν(x) = 1/L of the periodic part of x's expansion."""
    L, _ = L_periodic(quad_cf_expand(x).period)
    return L.reciprocal()


@dataclass(frozen=True)
class NuSequence:
    """Certified intervals for q_k·‖q_k ξ‖ and the running minimum of their upper ends."""

    indices: List[int] = field(default_factory=list)
    denominators: List[int] = field(default_factory=list)
    values: List[RatInterval] = field(default_factory=list)
    running_min: List[Fraction] = field(default_factory=list)

    def rows(self) -> List[Tuple[int, int, RatInterval, Fraction]]:
        return list(zip(self.indices, self.denominators, self.values, self.running_min))


def nu_sequence(
    digits: Union[Word, Sequence[int]], tail_depth: Optional[int] = None
) -> NuSequence:
    """q_k‖q_kξ‖ = 1/([a_{k+1}; a_{k+2}, ...] + q_{k-1}/q_k) for ξ = [a0; digits]."""
    letters = tuple(digits)
    if len(letters) < 3:
        raise ValueError("at least three digits are needed")
    _, qs = convergent_recurrence(letters, 0)
    result = NuSequence()
    current: Optional[Fraction] = None
    for k in range(1, len(letters)):
        end = len(letters) if tail_depth is None else min(len(letters), k + 1 + tail_depth)
        tail = prefix_interval(letters[k + 1 : end], letters[k])
        value = (tail + Fraction(qs[k - 1], qs[k])).reciprocal()
        current = value.hi if current is None else min(current, value.hi)
        result.indices.append(k)
        result.denominators.append(qs[k])
        result.values.append(value)
        result.running_min.append(current)
    return result
