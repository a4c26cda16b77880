"""Words over the alphabet {1, 2, 3}.

A word codes one subtriangle of the gasket and is the vertex identifier used
everywhere else in the package.  Words are plain ``str`` objects made of the
characters ``"1"``, ``"2"`` and ``"3"``; the empty string is the root word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

Word = str

ALPHABET = "123"
ROOT: Word = ""
ROOT_TOKEN = "-"

_LETTERS = frozenset(ALPHABET)


def parse_word(text: str) -> Word:
    """Parse a command-line spelling of a word (``"-"`` is the root)."""
    text = text.strip()
    if text == ROOT_TOKEN:
        return ROOT
    if not text:
        raise ValueError("empty string is not a word; spell the root as '-'")
    if not set(text) <= _LETTERS:
        raise ValueError(f"word {text!r} has letters outside {{1,2,3}}")
    return text


def format_word(word: Word) -> str:
    return word if word else ROOT_TOKEN


def is_word(obj) -> bool:
    return isinstance(obj, str) and set(obj) <= _LETTERS


def letter_set(word: Word) -> frozenset:
    return frozenset(word)


def third_letter(a: str, b: str) -> str:
    """The letter of {1,2,3} distinct from both ``a`` and ``b`` (a != b)."""
    return str(6 - int(a) - int(b))


def words_of_length(n: int) -> Iterator[Word]:
    """All 3**n words of length ``n`` in lexicographic order."""
    if n == 0:
        yield ROOT
        return
    for head in words_of_length(n - 1):
        for c in ALPHABET:
            yield head + c


def words_up_to(t: int) -> Iterator[Word]:
    """Words of length <= t, ordered by length then lexicographically."""
    for n in range(t + 1):
        yield from words_of_length(n)


def is_prefix(tau: Word, sigma: Word) -> bool:
    """True iff ``tau`` is a strict prefix of ``sigma``."""
    return len(tau) < len(sigma) and sigma.startswith(tau)


def common_prefix_length(a: Word, b: Word) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def _is_run(s: str, letter: str) -> bool:
    return s.count(letter) == len(s)


def are_neighbors(sigma: Word, tau: Word) -> bool:
    """Combinatorial edge test between two words.

    After deleting the longest common prefix, either one remainder is empty
    and the other misses at least one letter, or the remainders have the
    form ``i j^k`` and ``j i^k'``.  Equal words are never neighbors.
    """
    if sigma == tau:
        return False
    p = common_prefix_length(sigma, tau)
    s, r = sigma[p:], tau[p:]
    if not s:
        return len(set(r)) < 3
    if not r:
        return len(set(s)) < 3
    i, j = s[0], r[0]
    return _is_run(s[1:], j) and _is_run(r[1:], i)


def two_letter_suffix_start(word: Word) -> int:
    """Start index of the maximal suffix using at most two distinct letters."""
    seen = set()
    pos = len(word)
    while pos > 0:
        c = word[pos - 1]
        if c not in seen:
            if len(seen) == 2:
                break
            seen.add(c)
        pos -= 1
    return pos


def f_map(sigma: Word) -> Word:
    """Drop the maximal suffix of ``sigma`` having at most two distinct letters.

    The result is the shortest strict prefix of ``sigma`` adjacent to it.
    """
    if not sigma:
        raise ValueError("f undefined on empty word")
    return sigma[: two_letter_suffix_start(sigma)]


def _block_bounds(sigma: Word) -> list:
    # right-to-left greedy scan; bounds listed from the right end
    bounds = []
    end = len(sigma)
    while end > 0:
        start = two_letter_suffix_start(sigma[:end])
        bounds.append((start, end))
        end = start
    return bounds


def omega(sigma: Word) -> int:
    """Number of f-iterations needed to reach the empty word."""
    count = 0
    seen = set()
    for c in reversed(sigma):
        if c not in seen:
            if len(seen) == 2:
                count += 1
                seen = set()
            seen.add(c)
    return count + (1 if sigma else 0)


def L_value(sigma: Word) -> int:
    return omega(sigma) - 1 if sigma else 0


@dataclass(frozen=True)
class NormalDecomposition:
    blocks: tuple

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def word(self) -> Word:
        return "".join(self.blocks)

    @property
    def lengths(self) -> tuple:
        return tuple(len(b) for b in self.blocks)


def normal_decomposition(sigma: Word) -> NormalDecomposition:
    if not sigma:
        raise ValueError("normal decomposition undefined on empty word")
    bounds = _block_bounds(sigma)
    return NormalDecomposition(tuple(sigma[a:b] for a, b in reversed(bounds)))


def f_chain(sigma: Word) -> list:
    """``[sigma, f(sigma), f(f(sigma)), ..., ROOT]``."""
    chain = [sigma]
    while chain[-1]:
        chain.append(f_map(chain[-1]))
    return chain
