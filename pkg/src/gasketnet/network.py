"""Construction and export of the generation-t networks G_t."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .words import (ALPHABET, Word, are_neighbors, format_word,
                    two_letter_suffix_start, words_up_to)

# beyond this the adjacency no longer fits comfortably in memory
MAX_BUILD_T = 12
MAX_REFERENCE_T = 7

EXPORT_FORMATS = ("edge-list-tsv", "adjacency-jsonl", "metadata-json")

_TO_DIGITS = str.maketrans("123", "012")


class CapExceeded(ValueError):
    """Requested size is above a configured resource cap."""


def vertex_count(t: int) -> int:
    return (3 ** (t + 1) - 1) // 2


def index_of(sigma: Word) -> int:
    """Canonical index: by length, then lexicographically."""
    if not sigma:
        return 0
    return (3 ** len(sigma) - 1) // 2 + int(sigma.translate(_TO_DIGITS), 3)


def word_of(i: int, t: int) -> Word:
    if not 0 <= i < vertex_count(t):
        raise IndexError(f"vertex index {i} out of range for t={t}")
    n = 0
    while i >= (3 ** (n + 1) - 1) // 2:
        n += 1
    r = i - (3 ** n - 1) // 2
    letters = []
    for _ in range(n):
        r, d = divmod(r, 3)
        letters.append(ALPHABET[d])
    return "".join(reversed(letters))


@lru_cache(maxsize=None)
def _two_letter_words(m: int) -> tuple:
    """Words of length m with at most two distinct letters (3*2**m - 3 of them)."""
    out = set()
    for pair in ("12", "13", "23"):
        out.update("".join(p) for p in product(pair, repeat=m))
    return tuple(sorted(out))


def neighbors_of(sigma: Word, t: int) -> list:
    """All neighbors of ``sigma`` in G_t, generated without scanning V_t."""
    n = len(sigma)
    if n > t:
        raise ValueError(f"word {format_word(sigma)} is not in V_{t}")
    out = [sigma[:p] for p in range(two_letter_suffix_start(sigma), n)]
    for m in range(1, t - n + 1):
        out.extend(sigma + beta for beta in _two_letter_words(m))
    if n == 0:
        return out
    # lateral neighbors: sigma = beta i j^k paired with beta j i^k'
    head, i = sigma[:-1], sigma[-1]
    room = t - n
    for j in ALPHABET:
        if j != i:
            out.extend(head + j + i * k for k in range(room + 1))
    run = n - len(sigma.rstrip(sigma[-1]))
    if run < n:
        p = n - 1 - run
        head, i, j = sigma[:p], sigma[p], sigma[-1]
        out.extend(head + j + i * k for k in range(t - p))
    return out


@dataclass(frozen=True, eq=False)
class Network:
    """Immutable CSR adjacency of G_t over canonical vertex indices."""

    t: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def vertex_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def adjacency(self) -> list:
        return [self.neighbors(i).tolist() for i in range(self.vertex_count)]

    def edges(self):
        """Undirected edges (i, j) with i < j, in index order."""
        for i in range(self.vertex_count):
            for j in self.neighbors(i):
                if j > i:
                    yield i, int(j)

    def words(self) -> list:
        return list(words_up_to(self.t))

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.t == other.t
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None


def _from_edges(t: int, src: list, dst: list) -> Network:
    n = vertex_count(t)
    rows = np.asarray(src + dst, dtype=np.int64)
    cols = np.asarray(dst + src, dtype=np.int64)
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    indices = cols.astype(np.int32)
    indptr.setflags(write=False)
    indices.setflags(write=False)
    return Network(t, indptr, indices)


def _check_cap(t: int, cap: int, what: str):
    if t < 0:
        raise ValueError("t must be non-negative")
    if t > cap:
        raise CapExceeded(f"{what}: t={t} exceeds the cap of {cap}")


def build(t: int, cap: int = MAX_BUILD_T) -> Network:
    _check_cap(t, cap, "build")
    src, dst = [], []
    for i, sigma in enumerate(words_up_to(t)):
        for tau in neighbors_of(sigma, t):
            j = index_of(tau)
            if j > i:
                src.append(i)
                dst.append(j)
    return _from_edges(t, src, dst)


def build_reference(t: int) -> Network:
    """Quadratic builder testing every pair with ``are_neighbors``."""
    _check_cap(t, MAX_REFERENCE_T, "build_reference")
    words = list(words_up_to(t))
    src, dst = [], []
    for i, a in enumerate(words):
        for j in range(i + 1, len(words)):
            if are_neighbors(a, words[j]):
                src.append(i)
                dst.append(j)
    return _from_edges(t, src, dst)


def export(net: Network, fmt: str) -> bytes:
    if fmt == "edge-list-tsv":
        words = net.words()
        lines = []
        for i, j in net.edges():
            a, b = sorted((words[i], words[j]))
            lines.append((a, b))
        lines.sort()
        return "".join(f"{format_word(a)}\t{format_word(b)}\n" for a, b in lines).encode()
    if fmt == "adjacency-jsonl":
        words = net.words()
        out = []
        for i, w in enumerate(words):
            nbrs = [format_word(words[j]) for j in net.neighbors(i)]
            out.append(json.dumps({"word": format_word(w), "neighbors": nbrs}) + "\n")
        return "".join(out).encode()
    if fmt == "metadata-json":
        meta = {"t": net.t, "vertex_count": net.vertex_count, "edge_count": net.edge_count}
        return (json.dumps(meta, sort_keys=True) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")
