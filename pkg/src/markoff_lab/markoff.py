"""The Markoff equation, the extended tree of its solutions and the Cohn lift."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import gmpy2

from markoff_lab.errors import Degenerate, NotInTree
from markoff_lab.exactnum import (
    M,
    BinQuadForm,
    Mat2,
    QuadIrr,
    quadirr_make,
)


class Side(Enum):
    LEFT = "L"
    RIGHT = "R"

    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class MarkoffTriple:
    """A solution (m, m1, m2) of m² + m1² + m2² = 3·m·m1·m2 with its tree path."""

    m: int
    m1: int
    m2: int
    path: Tuple[Side, ...] = field(default=(), compare=False)
    member_sigma_star: bool = field(default=True, compare=False)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.m, self.m1, self.m2)

    def path_string(self) -> str:
        return "".join(side.value for side in self.path)

    def __str__(self) -> str:
        return f"({self.m},{self.m1},{self.m2})"


@dataclass(frozen=True)
class CohnMatrix:
    """The symmetric matrix (m k; k l)."""

    m: int
    k: int
    l: int

    def to_mat2(self) -> Mat2:
        return Mat2(self.m, self.k, self.k, self.l)

    @classmethod
    def from_mat2(cls, x: Mat2) -> "CohnMatrix":
        if not x.is_symmetric():
            raise ValueError(f"{x} is not symmetric")
        return cls(x.a, x.b, x.d)

    def det(self) -> int:
        return self.m * self.l - self.k * self.k

    def violations(self) -> List[str]:
        """Names of the Cohn-matrix constraints this matrix breaks."""
        broken = []
        if self.det() != 1:
            broken.append("determinant")
        if min(self.m, self.k, self.l) <= 0:
            broken.append("positivity")
        if not max(self.k, self.l) <= self.m <= 2 * self.k:
            broken.append("size")
        if self.l > self.m:
            broken.append("corner")
        return broken

    def row(self) -> Tuple[int, int, int]:
        return (self.m, self.k, self.l)


ROOT = MarkoffTriple(2, 1, 1, (), True)
TREE_ROOT = MarkoffTriple(5, 1, 2, (Side.LEFT,), True)
DEGENERATE = MarkoffTriple(1, 1, 1, (), False)

X_DEGENERATE = CohnMatrix(1, 1, 2)
X_ROOT = CohnMatrix(2, 1, 1)
COHN_TREE_ROOT = (CohnMatrix(5, 3, 2), CohnMatrix(1, 1, 2), CohnMatrix(2, 1, 1))

TripleLike = Union[MarkoffTriple, Sequence[int]]


def is_markoff(t: TripleLike) -> bool:
    m, m1, m2 = _entries(t)
    return m * m + m1 * m1 + m2 * m2 == 3 * m * m1 * m2


def _entries(t: TripleLike) -> Tuple[int, int, int]:
    if isinstance(t, MarkoffTriple):
        return t.as_tuple()
    m, m1, m2 = t
    return int(m), int(m1), int(m2)


def pairwise_coprime(t: TripleLike) -> bool:
    m, m1, m2 = _entries(t)
    return gmpy2.gcd(m, m1) == 1 and gmpy2.gcd(m, m2) == 1 and gmpy2.gcd(m1, m2) == 1


def successors(t: MarkoffTriple) -> Tuple[MarkoffTriple, Optional[MarkoffTriple]]:
    """Left and right children; (2,1,1) only has a left child."""
    if t.as_tuple() == DEGENERATE.as_tuple():
        raise Degenerate("(1,1,1) has no successors in the extended tree")
    m, m1, m2 = t.as_tuple()
    left = MarkoffTriple(3 * m * m1 - m2, m1, m, t.path + (Side.LEFT,))
    if t.as_tuple() == ROOT.as_tuple():
        return left, None
    right = MarkoffTriple(3 * m * m2 - m1, m, m2, t.path + (Side.RIGHT,))
    return left, right


def child(t: MarkoffTriple, side: Side) -> MarkoffTriple:
    left, right = successors(t)
    if side is Side.LEFT:
        return left
    if right is None:
        raise NotInTree(f"{t} has no right successor")
    return right


def locate(t: TripleLike) -> MarkoffTriple:
    """Annotates an ordered solution with its path from (2,1,1)."""
    m, m1, m2 = _entries(t)
    if min(m, m1, m2) <= 0 or not is_markoff((m, m1, m2)):
        raise NotInTree(f"({m},{m1},{m2}) is not a positive Markoff triple")
    original = (m, m1, m2)
    sides: List[Side] = []
    while (m, m1, m2) != ROOT.as_tuple():
        if m <= max(m1, m2) or m1 == m2:
            logging.error(f"{original} does not occur as an ordered tree node")
            raise NotInTree(f"{original} is not a node of the extended Markoff tree")
        if m2 > m1:
            sides.append(Side.LEFT)
            m, m1, m2 = m2, m1, 3 * m1 * m2 - m
        else:
            sides.append(Side.RIGHT)
            m, m1, m2 = m1, 3 * m1 * m2 - m, m2
    path = tuple(reversed(sides))
    if path and path[0] is not Side.LEFT:
        raise NotInTree(f"{original} is the excluded permutation under (2,1,1)")
    return MarkoffTriple(*original, path=path)


def as_triple(t: TripleLike) -> MarkoffTriple:
    """Returns t located in the tree, accepting the degenerate (1,1,1)."""
    if isinstance(t, MarkoffTriple) and (t.path or t.as_tuple() in ((2, 1, 1), (1, 1, 1))):
        return t
    if tuple(_entries(t)) == DEGENERATE.as_tuple():
        return DEGENERATE
    return locate(t)


def enumerate_tree(depth: int, include_extended_root: bool = False) -> List[MarkoffTriple]:
    """Nodes of the tree rooted at (5,1,2) down to the given depth, level by level."""
    nodes = [ROOT] if include_extended_root else []
    queue = deque([(TREE_ROOT, 0)])
    while queue:
        node, level = queue.popleft()
        nodes.append(node)
        if level < depth:
            left, right = successors(node)
            queue.append((left, level + 1))
            queue.append((right, level + 1))
    return nodes


def maximal_zigzag(t: TripleLike, n: int) -> List[MarkoffTriple]:
    """First n nodes of the maximal zigzag that starts at t."""
    node = as_triple(t)
    if node.as_tuple() == DEGENERATE.as_tuple():
        raise Degenerate("(1,1,1) starts no zigzag")
    if n < 1:
        raise ValueError("a zigzag has at least one node")
    side = node.path[-1] if node.path else Side.LEFT
    nodes = [node]
    while len(nodes) < n:
        node = child(node, side)
        nodes.append(node)
        side = side.other()
    return nodes


def zigzag_sides(t: TripleLike, n: int) -> List[Side]:
    """Directions of the first n steps of the maximal zigzag from t."""
    return [node.path[-1] for node in maximal_zigzag(t, n + 1)[1:]]


def cohn_step(
    node: Tuple[CohnMatrix, CohnMatrix, CohnMatrix], side: Side
) -> Tuple[CohnMatrix, CohnMatrix, CohnMatrix]:
    x, x1, x2 = (c.to_mat2() for c in node)
    if side is Side.LEFT:
        return (CohnMatrix.from_mat2(x1 @ M @ x), node[1], node[0])
    return (CohnMatrix.from_mat2(x @ M @ x2), node[0], node[2])


def cohn_node(t: TripleLike) -> Tuple[CohnMatrix, CohnMatrix, CohnMatrix]:
    """The lifted triple (x, x1, x2) for a node of the tree rooted at (5,1,2)."""
    node = as_triple(t)
    if not node.path:
        raise NotInTree(f"{node} has no Cohn node; use cohn_matrix")
    matrices = COHN_TREE_ROOT
    for side in node.path[1:]:
        matrices = cohn_step(matrices, side)
    return matrices


def cohn_matrix(t: TripleLike) -> CohnMatrix:
    node = as_triple(t)
    if node.as_tuple() == DEGENERATE.as_tuple():
        return X_DEGENERATE
    if node.as_tuple() == ROOT.as_tuple():
        return X_ROOT
    return cohn_node(node)[0]


def enumerate_cohn_tree(
    depth: int,
) -> Iterator[Tuple[MarkoffTriple, Tuple[CohnMatrix, CohnMatrix, CohnMatrix]]]:
    """Walks the triple tree and its Cohn lift side by side."""
    queue = deque([(TREE_ROOT, COHN_TREE_ROOT, 0)])
    while queue:
        node, matrices, level = queue.popleft()
        yield node, matrices
        if level < depth:
            left, right = successors(node)
            queue.append((left, cohn_step(matrices, Side.LEFT), level + 1))
            queue.append((right, cohn_step(matrices, Side.RIGHT), level + 1))


def offdiag_congruence(t: TripleLike) -> int:
    """The k in (0, m] with k·m2 ≡ m1 (mod m)."""
    m, m1, m2 = _entries(t)
    if m == 1:
        return 1
    k = int(m1 * gmpy2.invert(m2, m)) % m
    return k if k else m


def markoff_form(t: TripleLike) -> BinQuadForm:
    x = cohn_matrix(t)
    return BinQuadForm(x.m, 3 * x.m - 2 * x.k, x.l - 3 * x.k)


def markoff_alpha(t: TripleLike) -> Tuple[QuadIrr, QuadIrr]:
    """The root αₘ of Fₘ(1, T) and its conjugate."""
    x = cohn_matrix(t)
    alpha = quadirr_make(2 * x.k - 3 * x.m, 1, 9 * x.m * x.m - 4, 2 * x.m)
    return alpha, alpha.conjugate()


def markoff_value_check(t: TripleLike, mu: int, form: Optional[BinQuadForm] = None) -> bool:
    """μ(F)/√disc(F) = 1/√(9 − 4m⁻²) for F = Fₘ unless another form is given.

    Both sides are squared: μ²/disc(F) against m²/(9m² − 4).
    """
    m = _entries(t)[0]
    F = markoff_form(t) if form is None else form
    disc = F.disc()
    if disc <= 0:
        return False
    return Fraction(mu * mu, disc) == 1 / (9 - Fraction(4, m * m))


def fricke_check(
    triples: Sequence[Union[int, CohnMatrix]], twist: Mat2 = M
) -> bool:
    """Trace identity q₂² + q₁² + q₀² = q₂q₁q₀ + tr(ᵗM·M⁻¹) + 2 for three zigzag terms."""
    if len(triples) != 3:
        raise ValueError("the trace identity needs three consecutive terms")
    traces = []
    for entry in triples:
        if isinstance(entry, CohnMatrix):
            traces.append((entry.to_mat2() @ twist).trace())
        else:
            traces.append(twist.trace() * int(entry))
    q0, q1, q2 = traces
    correction = (twist.transpose() @ twist.inverse()).trace() + 2
    return q2 * q2 + q1 * q1 + q0 * q0 == q2 * q1 * q0 + correction


def zigzag_growth_ok(values: Sequence[int]) -> bool:
    """m_{i+2} ≥ (5/2)·m_{i+1}·m_i along a zigzag."""
    return all(
        2 * values[i + 2] >= 5 * values[i + 1] * values[i]
        for i in range(len(values) - 2)
    )

