"""Exact counting over normal decompositions and the renewal model.

Length-t words are grouped by the lengths of their normal-decomposition
blocks.  A block profile (k_1, ..., k_l) is realized by
``single_block_count(k_1) * prod(both_letters_count(k_i))`` words, which
turns sums over all words into short convolutions in the length.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .report import truncate_decimal

ALPHA_STAR = Fraction(2, 9)
MEAN_GAP = Fraction(9, 2)


def both_letters_count(k: int) -> int:
    """Words of length k over a fixed two-letter alphabet using both letters."""
    return 2 ** k - 2


def fixed_tail_count(k: int) -> int:
    """Words of length k with at most two distinct letters and a fixed last letter."""
    return 2 ** k - 1


def fixed_tail_both_count(k: int) -> int:
    """Words over a fixed letter pair, using both, ending in a fixed letter."""
    return 2 ** (k - 1) - 1


def single_block_count(k: int) -> int:
    """Words of length k with at most two distinct letters (one block)."""
    return 3 * 2 ** k - 3


def block_profile_count(lengths) -> int:
    """Number of words whose normal decomposition has these block lengths."""
    lengths = tuple(int(k) for k in lengths)
    if not lengths or lengths[0] < 1 or any(k < 2 for k in lengths[1:]):
        raise ValueError(f"invalid block profile {lengths}: need k_1 >= 1, k_i >= 2")
    if len(lengths) == 1:
        return single_block_count(lengths[0])
    count = fixed_tail_count(lengths[0]) * 3 * both_letters_count(lengths[-1])
    for k in lengths[1:-1]:
        count *= 2 * fixed_tail_both_count(k)
    return count


class _CompositionSums:
    """Growing cache of (number of words, sum of omega) per length.

    Index n holds the totals over all 3**n words of length n (index 0 unused).
    The convolution against 2**k - 2 is carried by two running sums, so
    extending by one length costs O(1) big-integer operations.
    """

    def __init__(self):
        self.count = [0, 3]
        self.omega_sum = [0, 3]
        self._p = [0, 0]  # running sums for count, for omega_sum + count
        self._q = [0, 0]

    def extend(self, up_to: int):
        while len(self.count) <= up_to:
            n = len(self.count)
            if n >= 3:
                xc = self.count[n - 2]
                xd = self.omega_sum[n - 2] + xc
                self._p = [2 * self._p[0] + 4 * xc, 2 * self._p[1] + 4 * xd]
                self._q = [self._q[0] + xc, self._q[1] + xd]
            e = single_block_count(n)
            self.count.append(e + self._p[0] - 2 * self._q[0])
            self.omega_sum.append(e + self._p[1] - 2 * self._q[1])


_sums = _CompositionSums()


def composition_totals(t: int) -> int:
    """Number of words of length t summed over all block profiles (= 3**t)."""
    _sums.extend(t)
    return _sums.count[t]


def sum_omega(t: int) -> int:
    """Exact sum of omega over all words of length t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0
    _sums.extend(t)
    return _sums.omega_sum[t]


def composition_sums_quadratic(up_to: int):
    """Direct O(t^2) convolution; reference for the running-sum cache."""
    count = [0] * (up_to + 1)
    total = [0] * (up_to + 1)
    for n in range(1, up_to + 1):
        c = d = single_block_count(n)
        for k in range(2, n):
            w = both_letters_count(k)
            c += w * count[n - k]
            d += w * (total[n - k] + count[n - k])
        count[n], total[n] = c, d
    return count, total


@dataclass(frozen=True)
class CountingTable:
    """Index k holds the value for length k; index 0 is unused (0)."""

    up_to: int
    both_letters: tuple
    fixed_tail: tuple
    fixed_tail_both: tuple
    single_block: tuple
    sum_omega: tuple


def counting_table(up_to: int) -> CountingTable:
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    ks = range(1, up_to + 1)

    def col(fn):
        return (0,) + tuple(fn(k) for k in ks)

    return CountingTable(up_to, col(both_letters_count), col(fixed_tail_count),
                         col(fixed_tail_both_count), col(single_block_count),
                         col(sum_omega))


def alpha_bar(t: int) -> Fraction:
    """Mean of L = omega - 1 over the 3**t words of length t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return Fraction(0)
    return Fraction(sum_omega(t) - 3 ** t, 3 ** t)


def alpha_table(start: int, stop: int, step: int = 1) -> list:
    """Rows ``(t, alpha_bar(t)/t, truncated 4-decimal string)``."""
    if not 1 <= start <= stop or step < 1:
        raise ValueError("need 1 <= start <= stop and step >= 1")
    rows = []
    for t in range(start, stop + 1, step):
        v = alpha_bar(t) / t
        rows.append((t, v, truncate_decimal(v, 4)))
    return rows


def kappa_series(t_max: int) -> list:
    """``[kappa_0, ..., kappa_{t_max}]``: mean of L over V_t."""
    out = []
    num = 0  # sum of L over V_t
    for t in range(t_max + 1):
        if t:
            num += sum_omega(t) - 3 ** t
        out.append(Fraction(2 * num, 3 ** (t + 1) - 1))
    return out


def kappa(t: int) -> Fraction:
    if t < 0:
        raise ValueError("t must be non-negative")
    return kappa_series(t)[-1]


def chi(t: int) -> Fraction:
    """Mean word length over V_t divided by t, in closed form."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return Fraction(3 * (1 + (2 * t - 1) * 3 ** t), 2 * t * (3 ** (t + 1) - 1))


@dataclass(frozen=True)
class AlphaSeries:
    alpha_bar: tuple
    kappa: tuple
    chi: tuple

    @property
    def alpha_star_estimate(self) -> Fraction:
        m = len(self.alpha_bar) - 1
        return self.alpha_bar[m] / m if m else Fraction(0)


def alpha_series(m_max: int) -> AlphaSeries:
    a = tuple(alpha_bar(m) for m in range(m_max + 1))
    c = (Fraction(0),) + tuple(chi(t) for t in range(1, m_max + 1))
    return AlphaSeries(a, tuple(kappa_series(m_max)), c)


# -- renewal model ---------------------------------------------------------

def gap_pmf(k: int) -> Fraction:
    """P(S = k) for the block length S between renewals."""
    return Fraction(2 ** k - 2, 3 ** k) if k >= 2 else Fraction(0)


def gap_mean_partial(k_max: int) -> Fraction:
    return sum((k * gap_pmf(k) for k in range(2, k_max + 1)), Fraction(0))


def _renewal_numerators(t_max: int) -> list:
    # E(Y_t) * 3**t is an integer; same running-sum trick as above
    z = [0] * (t_max + 1)
    p = q = 0
    for t in range(2, t_max + 1):
        x = 3 ** (t - 2) + z[t - 2]
        p = 2 * p + 4 * x
        q += x
        z[t] = p - 2 * q
    return z


def renewal_expectations(t_max: int) -> list:
    """Exact ``[E(Y_0), ..., E(Y_{t_max})]``."""
    return [Fraction(z, 3 ** t) for t, z in enumerate(_renewal_numerators(t_max))]


def renewal_expectations_recursive(t_max: int) -> list:
    """E(Y_t) = sum_k P(S=k) (1 + E(Y_{t-k})), evaluated term by term."""
    ey = [Fraction(0)] * (t_max + 1)
    for t in range(2, t_max + 1):
        ey[t] = sum((gap_pmf(k) * (1 + ey[t - k]) for k in range(2, t + 1)), Fraction(0))
    return ey


def scan_renewals(x: str) -> list:
    """Inter-renewal lengths S_1, S_2, ... read off a finite letter sequence.

    ``x`` is written right to left (``"...x_3 x_2 x_1"``, the rightmost
    character is x_1); a letter 1 is appended as x_0.  A renewal happens at
    the first position where the current block sees its third letter, and
    that letter opens the next block.  Only completed blocks are returned.
    """
    seq = "1" + x[::-1]  # seq[i] = x_i
    gaps = []
    start = 0
    seen = set()
    for i, c in enumerate(seq):
        if c not in seen and len(seen) == 2:
            gaps.append(i - start)
            start = i
            seen = set()
        seen.add(c)
    return gaps


@dataclass
class MonteCarloEstimate:
    t: int
    estimate: float
    std_err: float
    samples: int
    seed: int

    def csv_row(self) -> str:
        return f"{self.t},{self.estimate:.12g},{self.std_err:.12g},{self.samples},{self.seed}"


@dataclass
class RenewalModel:
    s_pmf: tuple  # P(S = k) for k = 0..len-1
    ey: tuple
    mean_s: Fraction = MEAN_GAP
    mc: list = field(default_factory=list)

    def ratio(self, t: int) -> Fraction:
        return self.ey[t] / t


def renewal_exact(t_max: int, pmf_terms: int = 120) -> RenewalModel:
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    pmf = tuple(gap_pmf(k) for k in range(pmf_terms + 1))
    return RenewalModel(pmf, tuple(renewal_expectations(t_max)))


_MC_CHUNK = 4096
_MC_TERMS = 120


def _gap_cdf() -> np.ndarray:
    acc = Fraction(0)
    cdf = []
    for k in range(2, _MC_TERMS + 1):
        acc += gap_pmf(k)
        cdf.append(float(acc))
    return np.array(cdf)


def _mc_chunk(t: int, m: int, seed: int, chunk: int, cdf: np.ndarray) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    draws = t // 2 + 1
    u = gen.random((m, draws))
    gaps = 2 + np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
    return (np.cumsum(gaps, axis=1) <= t).sum(axis=1)


def renewal_mc(t: int, samples: int, seed: int = 0, threads: int = 1) -> MonteCarloEstimate:
    """Monte Carlo E(Y_t) from i.i.d. gaps drawn by inverse CDF.

    Each chunk of samples has its own Philox stream keyed by (seed, chunk),
    so the result does not depend on ``threads``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if t < 0:
        raise ValueError("t must be non-negative")
    cdf = _gap_cdf()
    sizes = [min(_MC_CHUNK, samples - lo) for lo in range(0, samples, _MC_CHUNK)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda a: _mc_chunk(t, a[1], seed, a[0], cdf), enumerate(sizes)))
    y = np.concatenate(parts).astype(np.float64)
    se = float(y.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return MonteCarloEstimate(t, float(y.mean()), se, samples, seed)


@dataclass(frozen=True)
class SandwichReport:
    t: int
    renewal_sum: Fraction       # sum_k E(Y_{t-k}) T(k) / 3**k
    normalized_sum: Fraction    # sum_omega(t) / 3**t
    single_block_share: Fraction

    @property
    def middle(self) -> Fraction:
        return self.normalized_sum - self.single_block_share

    @property
    def holds(self) -> bool:
        return self.renewal_sum <= self.middle <= self.renewal_sum + 2


def renewal_sandwich(t: int, _z=None) -> SandwichReport:
    """Compare the normalized omega sum with the renewal-weighted sum.

    Checks ``A <= sum_omega(t)/3**t - e(t)/3**t <= A + 2`` where
    ``A = sum_{k=2}^{t-1} E(Y_{t-k}) (2**k - 2) / 3**k``.
    """
    if t < 3:
        raise ValueError("t must be >= 3")
    z = _z if _z is not None else _renewal_numerators(t)
    a_num = sum(z[t - k] * both_letters_count(k) for k in range(2, t))
    den = 3 ** t
    return SandwichReport(t, Fraction(a_num, den), Fraction(sum_omega(t), den),
                          Fraction(single_block_count(t), den))


def sandwich_range(t_lo: int, t_hi: int) -> list:
    z = _renewal_numerators(t_hi)
    return [renewal_sandwich(t, z) for t in range(t_lo, t_hi + 1)]
