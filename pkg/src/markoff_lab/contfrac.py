"""Exact continued fractions: surd expansion, convergents and prefix enclosures."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import gmpy2

from markoff_lab.errors import PrecisionExhausted
from markoff_lab.exactnum import FLIP, QuadIrr, RatInterval, Mat2, moebius_apply, quadirr_make
from markoff_lab.words import Word, phi


@dataclass(frozen=True)
class CFExpansion:
    """[a0; preperiod, period, period, ...]; prefix-only data has periodic=False."""

    a0: int
    preperiod: Word = field(default_factory=Word)
    period: Word = field(default_factory=Word)
    periodic: bool = True

    def stream(self, n: int) -> Word:
        """The first n partial quotients after a0."""
        letters = list(self.preperiod.letters[:n])
        if len(letters) < n:
            if not self.period:
                raise ValueError(f"only {len(letters)} digits are known")
            while len(letters) < n:
                letters.extend(self.period.letters)
        return Word(tuple(letters[:n]))

    def __str__(self) -> str:
        head = ", ".join(str(a) for a in self.preperiod)
        if not self.periodic:
            return f"[{self.a0}; {head}, ...]" if head else f"[{self.a0}; ...]"
        tail = ", ".join(str(a) for a in self.period)
        return f"[{self.a0}; {head} | {tail}]" if head else f"[{self.a0}; | {tail}]"


def quad_cf_expand(x: QuadIrr) -> CFExpansion:
    """Eventually periodic expansion of x, detected by repetition of the (P, Q) state."""
    N = x.q * x.q * x.D
    P, Q = (x.p, x.r) if x.q > 0 else (-x.p, -x.r)
    if (N - P * P) % Q:
        P, N, Q = P * abs(Q), N * Q * Q, Q * abs(Q)
    root = int(gmpy2.isqrt(N))
    digits: List[int] = []
    seen: Dict[Tuple[int, int], int] = {}
    index = 0
    while True:
        if index >= 1:
            if (P, Q) in seen:
                start = seen[(P, Q)]
                break
            seen[(P, Q)] = index
        if Q > 0:
            a = (P + root) // Q
        else:
            a = -((P + root) // -Q) - 1
        digits.append(a)
        P = a * Q - P
        Q = (N - P * P) // Q
        index += 1
    logging.debug("preperiod %d, period %d", start - 1, index - start)
    return CFExpansion(
        digits[0],
        Word(tuple(digits[1:start])),
        Word(tuple(digits[start:])),
    )


def periodic_value(period: Word) -> QuadIrr:
    """The purely periodic [Π, Π, ...] > 1, as the attracting fixed point of φ(Π)."""
    g = phi(period)
    trace_gap = g.a - g.d
    return quadirr_make(trace_gap, 1, trace_gap * trace_gap + 4 * g.b * g.c, 2 * g.c)


def cf_value(expansion: CFExpansion) -> QuadIrr:
    """Evaluates a periodic expansion exactly."""
    if not expansion.periodic or not expansion.period:
        raise ValueError("only periodic expansions have an exact value")
    head = phi((expansion.a0,) + expansion.preperiod.letters)
    return moebius_apply(head, periodic_value(expansion.period))


def is_reduced_quad(x: QuadIrr) -> bool:
    return x.compare(0) > 0 and x.compare(1) < 0 and x.conjugate().compare(-1) < 0


def reversed_period_matches(x: QuadIrr) -> bool:
    """For reduced x = [0; Π, Π, ...] checks that −x̄ = [Π*, Π*, ...]."""
    period = quad_cf_expand(x).period
    mirror = quad_cf_expand(-x.conjugate())
    count = 3 * len(period)
    stream = (mirror.a0,) + mirror.stream(count - 1).letters
    return stream == (period.reversed() * 3).letters


def convergent_recurrence(digits: Sequence[int], a0: int) -> Tuple[List[int], List[int]]:
    ps, qs = [a0], [1]
    p_prev, q_prev = 1, 0
    for a in digits:
        p_next, q_next = a * ps[-1] + p_prev, a * qs[-1] + q_prev
        p_prev, q_prev = ps[-1], qs[-1]
        ps.append(p_next)
        qs.append(q_next)
    return ps, qs


def convergents(digits: Sequence[int], a0: int = 0) -> List[Fraction]:
    ps, qs = convergent_recurrence(digits, a0)
    return [Fraction(p, q) for p, q in zip(ps, qs)]


def prefix_interval(digits: Sequence[int], a0: int = 0) -> RatInterval:
    """Every real [a0; digits, tail] with tail ≥ 1 lies in the returned interval."""
    if not digits:
        return RatInterval(Fraction(a0), Fraction(a0 + 1))
    ps, qs = convergent_recurrence(digits, a0)
    return RatInterval.hull(
        Fraction(ps[-1], qs[-1]),
        Fraction(ps[-1] + ps[-2], qs[-1] + qs[-2]),
    )


def serret_tail(digits: Sequence[int], a0: int, shift: int) -> Tuple[CFExpansion, Mat2]:
    """Drops a0 and the first `shift` digits; g maps the tail [0; ...] back onto the original."""
    digits = tuple(digits)
    if shift > len(digits):
        raise ValueError(f"cannot shift {shift} digits out of {len(digits)}")
    g = phi((a0,) + digits[:shift]) @ FLIP
    return CFExpansion(0, Word(digits[shift:]), Word(), periodic=False), g


def enclosure_digits(x: RatInterval, limit: int) -> Tuple[int, Word]:
    """a0 and the partial quotients shared by every point of x, at most limit of them."""
    a0 = x.floor()
    rest = x - a0
    digits: List[int] = []
    while len(digits) < limit and rest.lo > 0:
        rest = rest.reciprocal()
        try:
            a = rest.floor()
        except PrecisionExhausted:
            break
        digits.append(a)
        rest = rest - a
    return a0, Word(tuple(digits))
