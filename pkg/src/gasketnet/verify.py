"""Cross-module oracle suites behind ``gasketnet verify``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import asymptotics as asy
from .distance import bfs_distances_from, distance_matrix, geodesic_distance
from .geometry import boundaries_touch, is_nested, triangle_of
from .network import build, build_reference, index_of, neighbors_of, vertex_count
from .words import (ALPHABET, L_value, are_neighbors, f_chain, format_word,
                    normal_decomposition, omega, words_of_length, words_up_to)

SUITES = ("neighbors", "geometry", "geodesic", "counting", "renewal")


@dataclass
class Check:
    name: str
    passed: bool
    count: int
    counterexample: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = "" if self.passed or not self.counterexample else f"  first counterexample: {self.counterexample}"
        return f"{status}  {self.name}  ({self.count} cases){tail}"


def _run(name, cases, predicate, show=None) -> Check:
    n = 0
    for case in cases:
        n += 1
        if not predicate(case):
            return Check(name, False, n, show(case) if show else repr(case))
    return Check(name, True, n)


def _pair(a, b) -> str:
    return f"{format_word(a)} {format_word(b)}"


# -- neighbors -----------------------------------------------------------------

def neighbor_checks(tmax: int) -> list:
    t_pairs = min(tmax, 6)
    words = list(words_up_to(t_pairs))
    pairs = ((a, b) for i, a in enumerate(words) for b in words[i:])
    checks = [_run(f"neighbor symmetry, irreflexive on V_{t_pairs}", pairs,
                   lambda p: are_neighbors(*p) == are_neighbors(p[1], p[0])
                   and (p[0] != p[1] or not are_neighbors(*p)),
                   lambda p: _pair(*p))]

    t_claim = min(tmax, 9)

    def prefix_pairs():
        for tau in words_up_to(t_claim):
            for k in range(len(tau)):
                yield tau[:k], tau
    checks.append(_run(f"prefix neighbors iff suffix has <= 2 letters, |tau| <= {t_claim}",
                       prefix_pairs(),
                       lambda p: are_neighbors(*p) == (len(set(p[1][len(p[0]):])) <= 2),
                       lambda p: _pair(*p)))

    checks.append(_run(f"f-chain strictly shortens through neighbors, |sigma| <= {t_claim}",
                       words_up_to(t_claim),
                       lambda w: all(len(b) < len(a) and a.startswith(b) and are_neighbors(a, b)
                                     for a, b in zip(f_chain(w), f_chain(w)[1:]))
                       and len(f_chain(w)) - 1 == omega(w),
                       format_word))

    def decomposition_ok(w):
        if not w:
            return True
        d = normal_decomposition(w)
        blocks = d.blocks
        if d.word() != w or d.block_count != omega(w) or len(set(blocks[0])) > 2:
            return False
        for a, b in zip(blocks, blocks[1:]):
            if len(set(b)) != 2 or len(b) < 2 or set(ALPHABET) - set(b) != {a[-1]}:
                return False
        return True
    checks.append(_run(f"normal decomposition invariants, |sigma| <= {t_claim}",
                       words_up_to(t_claim), decomposition_ok, format_word))

    for t in range(min(tmax, 6) + 1):
        ok = build(t) == build_reference(t)
        checks.append(Check(f"fast builder equals reference builder, t={t}", ok,
                            vertex_count(t), "" if ok else f"t={t}"))

    t_lip = min(tmax, 7)
    edges = ((a, b) for a in words_up_to(t_lip) for b in neighbors_of(a, t_lip))
    checks.append(_run(f"|omega(a) - omega(b)| <= 1 across edges of G_{t_lip}", edges,
                       lambda p: abs(omega(p[0]) - omega(p[1])) <= 1,
                       lambda p: _pair(*p)))
    return checks


# -- geometry ------------------------------------------------------------------

def geometry_checks(tmax: int) -> list:
    t = min(tmax, 6)
    words = list(words_up_to(t))
    tri = {w: triangle_of(w, t) for w in words}
    pairs = ((a, b) for i, a in enumerate(words) for b in words[i + 1:])
    checks = [_run(f"boundary touching equals neighbor criteria on V_{t}", pairs,
                   lambda p: boundaries_touch(tri[p[0]], tri[p[1]]) == are_neighbors(*p),
                   lambda p: _pair(*p))]
    nested = ((w[:k], w) for w in words for k in range(len(w)))
    checks.append(_run(f"prefix triangles contain extensions on V_{t}", nested,
                       lambda p: is_nested(tri[p[1]], tri[p[0]]),
                       lambda p: _pair(*p)))
    return checks


# -- geodesic ------------------------------------------------------------------

def _first_letter_ids(t: int, letter: str) -> np.ndarray:
    return np.array([index_of(letter + w) for w in words_up_to(t - 1)])


def geodesic_checks(tmax: int) -> list:
    checks = []
    t_root = min(tmax, 8)
    for t in range(1, t_root + 1):
        d = bfs_distances_from(build(t), "")
        words = list(words_up_to(t))
        checks.append(_run(f"BFS distance to root equals omega, t={t}", range(len(words)),
                           lambda i: int(d[i]) == omega(words[i]),
                           lambda i: format_word(words[i])))

    t_mat = min(tmax, 7)
    mats = {t: distance_matrix(build(t)) for t in range(0, t_mat + 1)}
    for t in range(1, t_mat + 1):
        ok = all(np.array_equal(mats[t][np.ix_(ids, ids)], mats[t - 1])
                 for ids in (_first_letter_ids(t, c) for c in ALPHABET))
        checks.append(Check(f"common first letter strips off (d_t = d_(t-1)), t={t}", ok,
                            3 * vertex_count(t - 1) ** 2))
        for k in range(t):
            nk = vertex_count(k)
            ok = np.array_equal(mats[t][:nk, :nk], mats[k])
            checks.append(Check(f"distances on V_{k} unchanged inside G_{t}", ok, nk * nk))

    t_split = min(max(tmax, 1), 10)
    lv = {w: L_value(w) for w in words_up_to(t_split)}

    def split_ok(p):
        a, b = p
        return lv[a] + lv[b] <= lv[a + b] <= lv[a] + lv[b] + 1
    splits = ((w[:k], w[k:]) for w in lv for k in range(1, len(w)))
    checks.append(_run(f"L(a)+L(b) <= L(ab) <= L(a)+L(b)+1, |ab| <= {t_split}",
                       splits, split_ok, lambda p: _pair(*p)))

    for t in range(1, min(tmax, 6) + 1):
        words = list(words_up_to(t - 1))
        lsub = np.array([L_value(w) for w in words])
        ok = True
        for i, j in product(ALPHABET, repeat=2):
            if i == j:
                continue
            block = mats[t][np.ix_(_first_letter_ids(t, i), _first_letter_ids(t, j))]
            lo = lsub[:, None] + lsub[None, :]
            ok &= bool(np.all(block >= lo) and np.all(block <= lo + 3))
        checks.append(Check(f"cross-letter sandwich L+L <= d <= L+L+3, t={t}", ok,
                            6 * len(words) ** 2))

    t_geo = min(tmax, 6)
    words = list(words_up_to(t_geo))
    mat = mats[t_geo] if t_geo in mats else distance_matrix(build(t_geo))
    pairs = ((i, j) for i in range(len(words)) for j in range(i + 1, len(words)))
    checks.append(_run(f"recursive geodesic equals BFS on V_{t_geo}", pairs,
                       lambda p: geodesic_distance(words[p[0]], words[p[1]]) == mat[p],
                       lambda p: _pair(words[p[0]], words[p[1]])))
    return checks


# -- counting ------------------------------------------------------------------

def counting_checks(tmax: int) -> list:
    checks = []
    t_enum = min(tmax, 13)
    for t in range(1, t_enum + 1):
        brute = sum(omega(w) for w in words_of_length(t))
        checks.append(Check(f"sum of omega by convolution equals enumeration, t={t}",
                            brute == asy.sum_omega(t), 3 ** t,
                            "" if brute == asy.sum_omega(t) else f"t={t}"))

    t_prof = min(tmax, 9)
    for t in range(1, t_prof + 1):
        hist = Counter(normal_decomposition(w).lengths for w in words_of_length(t))
        bad = [p for p, c in hist.items() if asy.block_profile_count(p) != c]
        checks.append(Check(f"block profile counts equal enumeration, t={t}", not bad,
                            len(hist), str(bad[0]) if bad else ""))

    count, total = asy.composition_sums_quadratic(60)
    checks.append(_run("profile counts sum to 3^t, t <= 60", range(1, 61),
                       lambda t: count[t] == 3 ** t == asy.composition_totals(t),
                       lambda t: f"t={t}"))
    checks.append(_run("running-sum omega totals equal quadratic convolution, t <= 60",
                       range(1, 61), lambda t: total[t] == asy.sum_omega(t),
                       lambda t: f"t={t}"))
    checks.append(_run("2*fixed_tail_both = both_letters, single_block = 3*fixed_tail, k <= 60",
                       range(1, 61),
                       lambda k: 2 * asy.fixed_tail_both_count(k) == asy.both_letters_count(k)
                       and asy.single_block_count(k) == 3 * asy.fixed_tail_count(k),
                       lambda k: f"k={k}"))
    a = [asy.alpha_bar(k) for k in range(61)]
    pairs = ((k1, k2) for k1 in range(1, 60) for k2 in range(1, 61 - k1))
    checks.append(_run("superadditivity with slack 1 on alpha_bar, k1+k2 <= 60", pairs,
                       lambda p: a[p[0]] + a[p[1]] <= a[p[0] + p[1]] <= a[p[0]] + a[p[1]] + 1,
                       lambda p: f"k1={p[0]} k2={p[1]}"))
    checks.append(_run("alpha_bar non-decreasing, alpha_bar/m < 2/9, m <= 60", range(1, 61),
                       lambda m: a[m] >= a[m - 1] and a[m] / m < asy.ALPHA_STAR,
                       lambda m: f"m={m}"))
    return checks


# -- renewal -------------------------------------------------------------------

def _exhaustive_renewal_mean(t: int) -> Fraction:
    total = sum(len(asy.scan_renewals("".join(x))) for x in product(ALPHABET, repeat=t))
    return Fraction(total, 3 ** t)


def renewal_checks(tmax: int) -> list:
    checks = []
    mass = sum(asy.gap_pmf(k) for k in range(2, 121))
    checks.append(Check("gap pmf mass within 1e-15 of 1 at k=120", abs(1 - mass) < 1e-15, 119))
    mean = asy.gap_mean_partial(120)
    checks.append(Check("gap mean within 1e-8 of 9/2 at k=120",
                        abs(mean - asy.MEAN_GAP) < Fraction(1, 10 ** 8), 119))
    ey = asy.renewal_expectations(2000)
    rec = asy.renewal_expectations_recursive(60)
    checks.append(_run("running-sum E(Y_t) equals term-by-term recursion, t <= 60",
                       range(61), lambda t: ey[t] == rec[t], lambda t: f"t={t}"))
    t_enum = min(tmax, 10)
    checks.append(_run(f"E(Y_t) equals exhaustive block scan, t <= {t_enum}",
                       range(t_enum + 1), lambda t: _exhaustive_renewal_mean(t) == ey[t],
                       lambda t: f"t={t}"))
    checks.append(_run("E(Y_t) non-decreasing, t <= 2000", range(1, 2001),
                       lambda t: ey[t] >= ey[t - 1], lambda t: f"t={t}"))
    ratio = ey[2000] / 2000
    checks.append(Check("|E(Y_2000)/2000 - 2/9| < 1e-2",
                        abs(ratio - asy.ALPHA_STAR) < Fraction(1, 100), 1, str(float(ratio))))
    checks.append(_run("renewal sandwich holds exactly, 3 <= t <= 500",
                       asy.sandwich_range(3, 500), lambda r: r.holds, lambda r: f"t={r.t}"))
    mc = asy.renewal_mc(200, 100_000, seed=2024)
    z = abs(mc.estimate - float(ey[200])) / mc.std_err
    checks.append(Check("Monte Carlo E(Y_200) within 4 standard errors of exact", z < 4,
                        mc.samples, f"z={z:.3f}"))
    return checks


_SUITE_FUNCS = {
    "neighbors": neighbor_checks,
    "geometry": geometry_checks,
    "geodesic": geodesic_checks,
    "counting": counting_checks,
    "renewal": renewal_checks,
}


def run_suite(suite: str, tmax: int) -> list:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
        out.extend(_SUITE_FUNCS[name](tmax))
    return out
