"""
Fusion Module

Word arithmetic on the free monoid over {u, ū}, which labels the irreducible
corepresentations of the dual of the free unitary quantum group, and the
fusion calculus on those labels:

    xu ⊗ uy ≃ xuuy
    xu ⊗ ūy ≃ xuūy ⊕ x ⊗ y

Words are stored as bit sequences (bit i set when letter i is ū) so that the
level sets I_n can be enumerated as the integers 0 .. 2^n - 1.

Typical usage:
    x = parse_word("ub")
    tensor_decompose(x, x)   # {ubub, ub, e}
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from .exceptions import WordFormatError


class Letter(str, Enum):
    """The two generators; ``b`` stands for ū in the string syntax"""
    U = "u"
    UBAR = "b"

    @property
    def bit(self) -> int:
        return 1 if self is Letter.UBAR else 0

    @property
    def conjugate(self) -> "Letter":
        return Letter.U if self is Letter.UBAR else Letter.UBAR

    @classmethod
    def from_bit(cls, bit: int) -> "Letter":
        return cls.UBAR if bit else cls.U


@dataclass(frozen=True, slots=True)
class Word:
    """Immutable word; letter i is ū iff bit i of ``bits`` is set"""
    length: int
    bits: int = 0

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        bits = 0
        length = 0
        for i, letter in enumerate(letters):
            bits |= letter.bit << i
            length = i + 1
        return cls(length, bits)

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return self.length > 0

    def __getitem__(self, i: int) -> Letter:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return Letter.from_bit((self.bits >> i) & 1)

    def __iter__(self) -> Iterator[Letter]:
        for i in range(self.length):
            yield Letter.from_bit((self.bits >> i) & 1)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.length + other.length, self.bits | (other.bits << self.length))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __reduce__(self):
        return Word, (self.length, self.bits)

    @property
    def first_letter(self) -> Letter:
        return self[0]

    @property
    def last_letter(self) -> Letter:
        return self[self.length - 1]

    def prefix(self, n: int) -> "Word":
        n = max(0, min(n, self.length))
        return Word(n, self.bits & ((1 << n) - 1))

    def suffix(self, n: int) -> "Word":
        n = max(0, min(n, self.length))
        return Word(n, self.bits >> (self.length - n))

    def drop_last(self) -> "Word":
        return self.prefix(self.length - 1)

    def drop_first(self) -> "Word":
        return self.suffix(self.length - 1)

    def has_prefix(self, other: "Word") -> bool:
        return other.length <= self.length and self.prefix(other.length) == other

    def sort_key(self) -> Tuple[int, str]:
        return (self.length, format_word(self))


EMPTY = Word(0)
U = Word(1, 0)
UBAR = Word(1, 1)


def parse_word(text: str) -> Word:
    """
    Parse the shell syntax: letters ``u`` and ``b`` (ū), ``e`` or "" for the empty word

    Raises:
        WordFormatError: on any other character
    """
    text = text.strip()
    if text in ("", "e"):
        return EMPTY
    letters = []
    for ch in text:
        try:
            letters.append(Letter(ch))
        except ValueError:
            raise WordFormatError(f"Malformed word {text!r}: letters must be 'u' or 'b'")
    return Word.from_letters(letters)


def format_word(x: Word) -> str:
    if not x:
        return "e"
    return "".join(letter.value for letter in x)


def alternating_word(alpha: Letter, k: int) -> Word:
    """α^{(k)}: the alternating word of length k starting with α"""
    bits = 0
    for i in range(k):
        bits |= (alpha.bit ^ (i & 1)) << i
    return Word(k, bits)


def words_of_length(n: int) -> Iterator[Word]:
    """All 2^n words of the level set I_n, in bit order"""
    for bits in range(1 << n):
        yield Word(n, bits)


def words_up_to(n: int, include_empty: bool = True) -> Iterator[Word]:
    for length in range(0 if include_empty else 1, n + 1):
        yield from words_of_length(length)


def conjugate(x: Word) -> Word:
    """Reverse the word and conjugate every letter: the label of the contragredient"""
    bits = 0
    for i in range(x.length):
        if not (x.bits >> i) & 1:
            bits |= 1 << (x.length - 1 - i)
    return Word(x.length, bits)


def block_decomposition(x: Word) -> List[Tuple[Letter, int]]:
    """
    Split x greedily from the left into maximal alternating blocks α^{(k)}.

    A new block starts exactly where two equal letters are adjacent, so the
    first letter of each block equals the last letter of the previous one.
    """
    blocks: List[Tuple[Letter, int]] = []
    if not x:
        return blocks
    start_letter = x[0]
    run = 1
    previous = x.bits & 1
    for i in range(1, x.length):
        bit = (x.bits >> i) & 1
        if bit == previous:
            blocks.append((start_letter, run))
            start_letter = Letter.from_bit(bit)
            run = 1
        else:
            run += 1
        previous = bit
    blocks.append((start_letter, run))
    return blocks


def cancellation_depth(x: Word, y: Word) -> int:
    """Length of the chain of conjugate pairs (last of x, first of y) peeled by the fusion rule"""
    depth = 0
    limit = min(x.length, y.length)
    while depth < limit:
        a = (x.bits >> (x.length - 1 - depth)) & 1
        b = (y.bits >> depth) & 1
        if a == b:
            break
        depth += 1
    return depth


class Decomposition(Mapping[Word, int]):
    """Multiset of irreducible labels with positive integer multiplicities"""

    __slots__ = ("_summands",)

    def __init__(self, summands: Mapping[Word, int] | Iterable[Word] = ()):
        counts = Counter(summands) if not isinstance(summands, Mapping) else Counter(dict(summands))
        self._summands: Dict[Word, int] = {w: m for w, m in counts.items() if m > 0}

    def __getitem__(self, w: Word) -> int:
        return self._summands[w]

    def __iter__(self) -> Iterator[Word]:
        return iter(sorted(self._summands, key=Word.sort_key, reverse=True))

    def __len__(self) -> int:
        return len(self._summands)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Decomposition):
            return self._summands == other._summands
        if isinstance(other, Mapping):
            return self._summands == dict(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._summands.items()))

    def __add__(self, other: "Decomposition") -> "Decomposition":
        merged = Counter(self._summands)
        merged.update(other._summands)
        return Decomposition(merged)

    def __repr__(self) -> str:
        inner = ", ".join(
            format_word(w) if m == 1 else f"{m}·{format_word(w)}" for w, m in self.items()
        )
        return f"Decomposition({{{inner}}})"

    @property
    def total_multiplicity(self) -> int:
        return sum(self._summands.values())

    def is_multiplicity_free(self) -> bool:
        return all(m == 1 for m in self._summands.values())


def tensor_decompose(x: Word, y: Word) -> Decomposition:
    """
    Irreducible decomposition of x ⊗ y.

    The recursion xu⊗ūy = xuūy ⊕ x⊗y is unrolled over the cancellation depth,
    so the summands are x_j y_j where x_j drops the last j letters of x and y_j
    the first j letters of y, for j = 0 .. cancellation_depth(x, y).
    """
    summands: Dict[Word, int] = {}
    for j in range(cancellation_depth(x, y) + 1):
        w = x.prefix(x.length - j) + y.suffix(y.length - j)
        summands[w] = summands.get(w, 0) + 1
    return Decomposition(summands)


def iterated_decompose(factors: Sequence[Word], right_associated: bool = False) -> Decomposition:
    """
    Decomposition of f_1 ⊗ … ⊗ f_m with multiplicities.

    Left association folds ((f_1⊗f_2)⊗f_3)…; right association folds
    f_1⊗(f_2⊗(…)). Both must give the same multiset.
    """
    if not factors:
        return Decomposition({EMPTY: 1})
    order = list(reversed(factors)) if right_associated else list(factors)
    acc: Counter = Counter({order[0]: 1})
    for factor in order[1:]:
        nxt: Counter = Counter()
        for w, m in acc.items():
            pair = tensor_decompose(factor, w) if right_associated else tensor_decompose(w, factor)
            for v in pair:
                nxt[v] += m
        acc = nxt
    return Decomposition(acc)


def triple_decompose(x: Word, y: Word, z: Word, right_associated: bool = False) -> Decomposition:
    return iterated_decompose((x, y, z), right_associated=right_associated)


def is_subobject(w: Word, x: Word, y: Word) -> bool:
    """
    w ⊂ x⊗y iff x = x'v, y = v̄y' and w = x'y' for some v.

    Checked directly on the split rather than by building the decomposition.
    """
    excess = x.length + y.length - w.length
    if excess < 0 or excess % 2:
        return False
    j = excess // 2
    if j > cancellation_depth(x, y):
        return False
    return w == x.prefix(x.length - j) + y.suffix(y.length - j)
