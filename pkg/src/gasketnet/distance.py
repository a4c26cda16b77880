"""Geodesic distances on G_t and exact all-pairs aggregates."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .network import CapExceeded, Network, index_of, vertex_count, word_of
from .report import render_decimal
from .words import Word, common_prefix_length, format_word, omega, third_letter, words_up_to

MAX_ALL_PAIRS_T = 8
_BLOCK = 64

CSV_HEADER = "t,pi,lambda,mu,nu,n_vertices,apl_exact_num,apl_exact_den,apl_decimal"
SAMPLED_HEADER = "t,estimate,std_err,pairs,seed"


def _ms_bfs(net: Network, sources) -> np.ndarray:
    """Bit-parallel BFS from up to 64 sources at once.

    Bit b of a vertex's word marks that source b has reached it.  Returns a
    ``(len(sources), N)`` array of hop counts.
    """
    sources = np.asarray(sources, dtype=np.int64)
    b = len(sources)
    if not 0 < b <= _BLOCK:
        raise ValueError("between 1 and 64 sources per block")
    n = net.vertex_count
    bits = np.left_shift(np.uint64(1), np.arange(b, dtype=np.uint64))
    frontier = np.zeros(n, dtype=np.uint64)
    np.bitwise_or.at(frontier, sources, bits)
    visited = frontier.copy()
    dist = np.zeros((b, n), dtype=np.uint16)
    nonempty = np.flatnonzero(np.diff(net.indptr))
    starts = net.indptr[nonempty]
    reached = np.zeros(n, dtype=np.uint64)
    level = 0
    while len(starts):
        level += 1
        reached[nonempty] = np.bitwise_or.reduceat(frontier[net.indices], starts)
        new = reached & ~visited
        if not new.any():
            break
        visited |= new
        frontier = new
        hit = np.unpackbits(new.astype("<u8").view(np.uint8).reshape(n, 8),
                            axis=1, bitorder="little")[:, :b]
        dist[hit.T.astype(bool)] = level
    if np.any(visited != np.uint64((1 << b) - 1)):
        raise ValueError("network is not connected")
    return dist


def _vertex_index(net: Network, sigma: Word) -> int:
    if len(sigma) > net.t:
        raise ValueError(f"word {format_word(sigma)} is not in V_{net.t}")
    return index_of(sigma)


def bfs_distances_from(net: Network, sigma: Word) -> np.ndarray:
    return _ms_bfs(net, [_vertex_index(net, sigma)])[0]


def bfs_distance(net: Network, sigma: Word, tau: Word) -> int:
    i, j = _vertex_index(net, sigma), _vertex_index(net, tau)
    if i == j:
        return 0
    return int(_ms_bfs(net, [i])[0, j])


def distance_matrix(net: Network) -> np.ndarray:
    """Dense ``N x N`` hop-count matrix (small t only)."""
    n = net.vertex_count
    out = np.empty((n, n), dtype=np.uint16)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        out[lo:hi] = _ms_bfs(net, range(lo, hi))
    return out


def distance_to_root(sigma: Word) -> int:
    return omega(sigma)


# Set distances of a word u inside an untruncated copy of the network:
# to the root, to each corner set {c^m}, and to each side set (words over
# two letters).  Prepending a letter updates them in O(1); a geodesic never
# re-enters a top-level subtriangle, so only a handful of routes compete.
_PAIRS = ("12", "13", "23")


@lru_cache(maxsize=1 << 20)
def _gate_distances(u: Word):
    if not u:
        return 0, {"1": 0, "2": 0, "3": 0}, dict.fromkeys(_PAIRS, 0)
    m = u[0]
    _, g, s = _gate_distances(u[1:])
    w = 1 + min(s[p] for p in _PAIRS if m in p)
    g2 = {}
    for c in "123":
        if c == m:
            g2[c] = min(g[c], w)
        else:
            g2[c] = min(w, g[c] + 1, g[third_letter(m, c)] + 2)
    s2 = {}
    for p in _PAIRS:
        if m in p:
            s2[p] = min(s[p], w)
        else:
            s2[p] = min(w, g[p[0]] + 1, g[p[1]] + 1)
    return w, g2, s2


def geodesic_distance(sigma: Word, tau: Word) -> int:
    """Exact d_t(sigma, tau) for any t >= max(|sigma|, |tau|), without BFS."""
    p = common_prefix_length(sigma, tau)
    a, b = sigma[p:], tau[p:]
    if not a or not b:
        return omega(a or b)
    i, j = a[0], b[0]
    k = third_letter(i, j)
    wa, ga, _ = _gate_distances(a)
    wb, gb, _ = _gate_distances(b)
    _, ga1, _ = _gate_distances(a[1:])
    _, gb1, _ = _gate_distances(b[1:])
    return min(ga1[j] + gb1[i] + 1, wa + wb, ga1[k] + gb1[k] + 2)


@dataclass(frozen=True)
class DistanceSummary:
    t: int
    pi: int
    lam: int
    mu: int
    nu: int
    n_vertices: int

    @property
    def pair_count(self) -> int:
        return self.n_vertices * (self.n_vertices - 1) // 2

    @property
    def apl(self) -> Fraction:
        return Fraction(self.pi, self.pair_count)

    def csv_row(self) -> str:
        a = self.apl
        return ",".join(str(x) for x in (
            self.t, self.pi, self.lam, self.mu, self.nu, self.n_vertices,
            a.numerator, a.denominator, render_decimal(a)))


def _first_letters(t: int) -> np.ndarray:
    return np.array([int(w[0]) if w else 0 for w in words_up_to(t)], dtype=np.int8)


def _block_sums(net: Network, first: np.ndarray, lo: int, hi: int):
    src = np.arange(lo, hi)
    rows = _ms_bfs(net, src).astype(np.int64)
    tgt = np.arange(net.vertex_count)
    upper = tgt[None, :] > src[:, None]
    fs, ft = first[src][:, None], first[None, :]
    root = (fs == 0) | (ft == 0)
    same = (fs == ft) & ~root
    cross = ~(root | same)
    return (int(rows[upper].sum()), int(rows[upper & root].sum()),
            int(rows[upper & same].sum()), int(rows[upper & cross].sum()))


def all_pairs_summary(net: Network, threads: int = 1,
                      cap: int = MAX_ALL_PAIRS_T) -> DistanceSummary:
    """Exact unordered-pair aggregates from one BFS per source vertex."""
    if net.t > cap:
        raise CapExceeded(
            f"exact all-pairs: t={net.t} exceeds the cap of {cap}; use sampled mode")
    if net.vertex_count < 2:
        raise ValueError("all-pairs summary needs at least two vertices (t >= 1)")
    first = _first_letters(net.t)
    n = net.vertex_count
    blocks = [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda r: _block_sums(net, first, *r), blocks))
    pi, lam, mu, nu = (sum(col) for col in zip(*parts))
    return DistanceSummary(net.t, pi, lam, mu, nu, n)


@dataclass(frozen=True)
class SampledAPL:
    t: int
    estimate: float
    std_err: float
    pairs: int
    seed: int

    def csv_row(self) -> str:
        return f"{self.t},{self.estimate:.12g},{self.std_err:.12g},{self.pairs},{self.seed}"


def sampled_apl(net, pairs: int, seed: int = 0) -> SampledAPL:
    """Monte Carlo estimate of the average path length.

    ``net`` is a :class:`Network` or just the generation ``t``; pair distances
    come from :func:`geodesic_distance`, so G_t need not be materialized.
    Pairs are i.i.d. uniform over unordered pairs of distinct vertices.
    """
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    t = net.t if isinstance(net, Network) else int(net)
    n = vertex_count(t)
    if n < 2:
        raise ValueError("sampling needs at least two vertices (t >= 1)")
    rng = np.random.default_rng(seed)
    a = rng.integers(n, size=pairs)
    b = rng.integers(n - 1, size=pairs)
    b = b + (b >= a)
    d = np.fromiter((geodesic_distance(word_of(int(x), t), word_of(int(y), t))
                     for x, y in zip(a, b)), dtype=np.float64, count=pairs)
    se = float(d.std(ddof=1) / math.sqrt(pairs)) if pairs > 1 else float("nan")
    return SampledAPL(t, float(d.mean()), se, pairs, seed)
