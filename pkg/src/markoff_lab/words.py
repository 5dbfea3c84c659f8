"""Words over the positive integers, the a/b submonoid, the U/V substitutions and ξₘ digits."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

from markoff_lab.errors import FactorizationFailure, MethodDisagreement, NotInPsiTree
from markoff_lab.exactnum import IDENTITY, Mat2
from markoff_lab.markoff import Side, TripleLike, as_triple, maximal_zigzag


@dataclass(frozen=True)
class Word:
    """A finite word over the positive integers."""

    letters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple(int(a) for a in self.letters)
        if any(a < 1 for a in letters):
            raise ValueError(f"letters must be positive: {letters}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, index: Union[int, slice]) -> Union[int, "Word"]:
        if isinstance(index, slice):
            return Word(self.letters[index])
        return self.letters[index]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __mul__(self, times: int) -> "Word":
        return Word(self.letters * times)

    def reversed(self) -> "Word":
        return Word(self.letters[::-1])

    def is_prefix_of(self, other: "Word") -> bool:
        return other.letters[: len(self)] == self.letters

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if not text:
            return cls()
        if "," in text:
            return cls(tuple(int(part) for part in text.split(",")))
        return cls(tuple(int(ch) for ch in text))

    def __str__(self) -> str:
        if all(a <= 9 for a in self.letters):
            return "".join(str(a) for a in self.letters)
        return ",".join(str(a) for a in self.letters)


_EXPANSION = {"a": (1, 1), "b": (2, 2)}


@dataclass(frozen=True)
class W2Word:
    """A word in the letters a = 11 and b = 22."""

    letters: str = ""

    def __post_init__(self) -> None:
        if set(self.letters) - set("ab"):
            raise ValueError(f"not a word over a, b: {self.letters!r}")

    def expand(self) -> Word:
        return Word(tuple(d for ch in self.letters for d in _EXPANSION[ch]))

    def reversed(self) -> "W2Word":
        return W2Word(self.letters[::-1])

    def __add__(self, other: "W2Word") -> "W2Word":
        return W2Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


@dataclass(frozen=True)
class EndoWord:
    """A product of U and V acting on the right: w^(XY) = (w^X)^Y."""

    letters: str = ""

    def __post_init__(self) -> None:
        if set(self.letters) - set("UV"):
            raise ValueError(f"not a word over U, V: {self.letters!r}")

    def __add__(self, other: "EndoWord") -> "EndoWord":
        return EndoWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters or "I"


A = W2Word("a")
B = W2Word("b")
AB = W2Word("ab")
VU = EndoWord("VU")

_SUBSTITUTIONS = {
    "U": {"a": "ab", "b": "b"},
    "V": {"a": "a", "b": "ab"},
}


def phi(w: Union[Word, Sequence[int]]) -> Mat2:
    """Product of the matrices (a 1; 1 0) over the letters of w."""
    result = IDENTITY
    for a in w:
        result = Mat2(result.a * a + result.b, result.a, result.c * a + result.d, result.c)
    return result


def apply_morphism(w: W2Word, e: EndoWord) -> W2Word:
    letters = w.letters
    for endo in e.letters:
        table = _SUBSTITUTIONS[endo]
        letters = "".join(table[ch] for ch in letters)
    return W2Word(letters)


def psi_for_triple(t: TripleLike) -> EndoWord:
    """The endomorphism at the position of t in the tree rooted at (5,1,2)."""
    node = as_triple(t)
    if not node.path:
        raise NotInPsiTree(f"{node} has no U/V endomorphism")
    psi = ""
    for side in node.path[1:]:
        psi = ("V" if side is Side.LEFT else "U") + psi
    return EndoWord(psi)


def pi_word(t: TripleLike) -> Word:
    node = as_triple(t)
    if node.as_tuple() == (1, 1, 1):
        return A.expand()
    if node.as_tuple() == (2, 1, 1):
        return B.expand()
    return apply_morphism(AB, psi_for_triple(node)).expand()


def palindrome_factor(e: EndoWord) -> W2Word:
    """The palindrome p with (ab)^e = a·p·b."""
    w = apply_morphism(AB, e).letters
    if len(w) < 2 or w[0] != "a" or w[-1] != "b" or w[1:-1] != w[1:-1][::-1]:
        logging.error(f"(ab)^{e} = {w} has no a·p·b palindromic factorization")
        raise FactorizationFailure(f"(ab)^{e} = {w}")
    return W2Word(w[1:-1])


def xi_endomorphism(t: TripleLike) -> EndoWord:
    """ψ of the zigzag node m^(r), r = 1 when the first step is Right and 2 otherwise."""
    first, second = maximal_zigzag(t, 2)
    node = first if second.path[-1] is Side.RIGHT else second
    return psi_for_triple(node)


def xi_prefixes(t: TripleLike) -> Iterator[W2Word]:
    """The nested prefixes (ab)^((VU)^i ψ), i = 0, 1, 2, ..."""
    psi = xi_endomorphism(t)
    seed = AB
    previous = W2Word()
    while True:
        prefix = apply_morphism(seed, psi)
        if not prefix.letters.startswith(previous.letters):
            logging.error(f"prefix {previous} is not extended by {prefix}")
            raise MethodDisagreement("digit-stream prefixes are not nested")
        yield prefix
        previous = prefix
        seed = apply_morphism(seed, VU)


def xi_word_stream(t: TripleLike, n: int) -> Word:
    """The first n partial quotients a1, a2, ... of ξₘ = [0; a1, a2, ...]."""
    for prefix in xi_prefixes(t):
        digits = prefix.expand()
        if len(digits) >= n:
            return digits[:n]
    raise AssertionError("unreachable")


def cube_prefixes(prefix: Word) -> List[Word]:
    """Every word whose cube is a prefix of the given word."""
    letters = prefix.letters
    return [
        Word(letters[:size])
        for size in range(1, len(letters) // 3 + 1)
        if letters[:size] * 3 == letters[: 3 * size]
    ]
