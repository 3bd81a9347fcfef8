"""Acceptance checks; each test carries a ``criterion`` marker and the run ends
with one PASS/FAIL line per criterion (an expected failure counts as FAIL)."""

import random
import time
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import gcd
from pathlib import Path

import numpy as np
import pytest

from biqlab import kernels
from biqlab.actions import (LinearTorusAction, check_family_conditions, freeness_oracle, is_free,
                            required_oracle_bound, s3cp2_linear, s22s3_action, s22s3_gcds,
                            t3_action)
from biqlab.cli import cmd_report
from biqlab.invariants import (h_groups, k_invariant, p1_multiple, present_t3_quotient,
                               record_t3, reference_topology, transgression_presentation_t2)
from biqlab.moves import SPORADIC, canonicalize_t3, enumerate_valid, family_matrix
from biqlab.ringiso import (class_preserving_iso, has_class_preserving_iso, is_ring_iso,
                            p1_mod24_obstruction, preserves_classes, r_family_criterion)

FIXTURES = Path(__file__).parent / "fixtures"
CATALOGUE = {"Family1", "Family2", "Family3", "SporadicA1", "SporadicA2", "SporadicA3",
             "SporadicA4"}


def crit(n, title):
    return pytest.mark.criterion(n, title)


def oracle(a):
    return freeness_oracle(a, required_oracle_bound(a))


# -- 1 ----------------------------------------------------------------------------

@crit(1, "every valid bound-3 matrix lands in a family or sporadic, < 60 s")
def test_c1_matrix_list_complete():
    t = time.perf_counter()
    mats = list(enumerate_valid(3))
    forms = [canonicalize_t3(m) for m in mats]
    elapsed = time.perf_counter() - t
    assert len(mats) > 3000
    assert all(f.classified for f in forms)
    assert {f.kind for f in forms} <= CATALOGUE
    assert {f.kind for f in forms} == CATALOGUE
    assert elapsed < 60, elapsed


# -- 2 ----------------------------------------------------------------------------

@crit(2, "is_free agrees with the brute-force oracle")
def test_c2_t3_normal_form_exhaustive():
    n = free = 0
    for off in product(range(-2, 3), repeat=6):
        m = ((1, off[0], off[1]), (off[2], 1, off[3]), (off[4], off[5], 1))
        a = t3_action(m)
        f = is_free(a)
        assert f == oracle(a), m
        n += 1
        free += f
    assert n == 5 ** 6 and 0 < free < n


@crit(2, "is_free agrees with the brute-force oracle")
def test_c2_t3_general_sample():
    # arbitrary weights on all six coordinates; the full space has 5^18 points
    rng = random.Random(20240611)
    for _ in range(20000):
        f = [[tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(2)] for _ in range(3)]
        a = LinearTorusAction.from_factors(3, f)
        assert is_free(a) == oracle(a), f


@crit(2, "is_free agrees with the brute-force oracle")
def test_c2_s5s3_rank1_exhaustive():
    n = free = 0
    for w in product(range(-4, 5), repeat=5):
        a = LinearTorusAction.from_factors(1, [[(w[0],), (w[1],), (w[2],)], [(w[3],), (w[4],)]])
        f = is_free(a)
        assert f == oracle(a), w
        n += 1
        free += f
    assert n == 9 ** 5 and 0 < free < n


# -- 3 ----------------------------------------------------------------------------

@crit(3, "closed-form gcd conditions match is_free")
def test_c3_s3cp2_gcd_rule():
    for a, b, c, d, e in product(range(-4, 5), repeat=5):
        assert is_free(s3cp2_linear(a, b, c, d, e)) == (gcd(a * b * c, d * e) == 1)


def _nine_gcds(G):
    a, b, c, d, e, f, g, h, i, j = G.T
    g3 = np.gcd.reduce
    return [np.gcd(a, d), np.gcd(a * b, g * i), np.gcd(d * f, h * j),
            np.gcd(a, e * h - g * f), np.gcd(a, e * j - i * f),
            np.gcd(d, b * h - c * g), np.gcd(d, b * j - i * c),
            g3([b * f - e * c, b * h - g * c, e * h - f * g]),
            g3([b * f - e * c, b * j - i * c, e * j - i * f])]


def _s22s3_weights(G):
    a, b, c, d, e, f, g, h, i, j = G.T
    z = np.zeros_like(a)
    cols = [(a, z), (b, c), (z, d), (e, f), (g, h), (i, j)]
    return np.stack([np.stack(p, 1) for p in cols], 1)


@crit(3, "closed-form gcd conditions match is_free")
def test_c3_s22s3_nine_gcds():
    tail = np.array(list(product(range(-2, 3), repeat=8)), dtype=np.int64)
    total = agree_free = 0
    kept = []
    for a, b in product(range(-2, 3), repeat=2):
        G = np.hstack([np.tile([a, b], (len(tail), 1)), tail])
        x = G.T
        norm = (np.gcd.reduce([x[0], x[1], x[4], x[6], x[8]]) == 1) & \
               (np.gcd.reduce([x[2], x[3], x[5], x[7], x[9]]) == 1)
        G = G[norm]
        crit_ok = np.all(np.array(_nine_gcds(G)) == 1, axis=0)
        free = kernels.batch_selection_free(_s22s3_weights(G), [2, 2, 2])
        assert np.array_equal(crit_ok, free)
        total += len(G)
        agree_free += int(free.sum())
        kept.append(G[::400])
    assert total == 8305924 and agree_free > 0
    # the library's own route on a spread of the same tuples
    for w in np.vstack(kept).tolist():
        ok = all(x == 1 for x in s22s3_gcds(w))
        assert is_free(s22s3_action(w)) == ok, w


# -- 4 ----------------------------------------------------------------------------

def _det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@crit(4, "|k| equals |det| of the transgression matrix, < 10 s")
def test_c4_k_formula():
    t = time.perf_counter()
    tail = np.array(list(product(range(-2, 3), repeat=8)), dtype=np.int64).T
    n = 0
    for a, b in product(range(-2, 3), repeat=2):
        w = [np.full(tail.shape[1], a), np.full(tail.shape[1], b)] + list(tail)
        k = k_invariant(w)
        d = _det3(transgression_presentation_t2(w))
        assert np.array_equal(np.abs(k), np.abs(d))
        n += tail.shape[1]
    assert n == 5 ** 10
    assert time.perf_counter() - t < 10


# -- 5 ----------------------------------------------------------------------------

@crit(5, "free T^3 quotients have the integral cohomology groups of (S^2)^3")
def test_c5_cohomology_groups():
    n = 0
    for m in enumerate_valid(3):
        if not is_free(t3_action(m)):
            continue
        groups = h_groups(present_t3_quotient(m)[0])
        assert [g.free_rank for g in groups] == [1, 0, 3, 0, 3, 0, 1], m
        assert all(not g.torsion for g in groups), m
        n += 1
    assert n > 3000


# -- 6 ----------------------------------------------------------------------------

# images of the generators of the family ring, as printed
PRINTED = {
    ("SporadicA2", (0, 1)): ((1, 1, 2), (1, 0, 2), (0, 0, 1)),
    ("SporadicA4", (0, 2)): ((1, 1, 1), (1, 0, 1), (0, 0, 1)),
}


@crit(6, "sporadic witnesses replay; p1 multiples of A1, A3 and their mod-24 split")
@pytest.mark.xfail(strict=True, reason="printed substitutions are not ring isomorphisms; "
                   "A4 and Family1(0,2) differ in w2")
def test_c6_printed_witnesses():
    for (kind, params), s in PRINTED.items():
        rf, cf = present_t3_quotient(family_matrix("Family1", params))
        ra, ca = present_t3_quotient(SPORADIC[kind])
        assert is_ring_iso(rf, ra, s) and preserves_classes(ra, cf, ca, s)
        assert class_preserving_iso(rf, cf, ra, ca, bound=2) is not None


@crit(6, "sporadic witnesses replay; p1 multiples of A1, A3 and their mod-24 split")
def test_c6_p1_multiples_and_mod24():
    r1, c1 = present_t3_quotient(SPORADIC["SporadicA1"])
    r3, c3 = present_t3_quotient(SPORADIC["SporadicA3"])
    assert p1_multiple(r1, c1) == 1
    assert p1_multiple(r3, c3) == 10
    cert = p1_mod24_obstruction(record_t3(SPORADIC["SporadicA1"]), record_t3(SPORADIC["SporadicA3"]))
    assert cert is not None and cert["values"][0] != cert["values"][1]


# -- 7 ----------------------------------------------------------------------------

R_PARAMS = list(product(range(-3, 4), repeat=2))


@lru_cache(maxsize=None)
def _r_presentation(p):
    return present_t3_quotient(family_matrix("Family1", p))


@lru_cache(maxsize=1)
def _r_search():
    """Exhaustive class-preserving search at bound 6 over unordered pairs."""
    out = {}
    for p, q in combinations_with_replacement(R_PARAMS, 2):
        out[p, q] = has_class_preserving_iso(*_r_presentation(p), *_r_presentation(q), bound=6)
    return out


@crit(7, "R-family criterion agrees with the bound-6 search")
@pytest.mark.xfail(strict=True, reason="stated criterion misses the exchange of the first two "
                   "generators, e.g. R(0,1) and R(1,1) are isomorphic")
def test_c7_r_family_criterion():
    bad = [(p, q) for (p, q), found in _r_search().items() if r_family_criterion(*p, *q) != found]
    assert not bad, f"{len(bad)} disagreements, first {bad[:3]}"


def test_r_family_search_matches_symmetric_criterion():
    # with x = c1 and y = c1 - c2, swapping the first two generators exchanges x and y,
    # parities included
    def corrected(p, q):
        x1, y1, x2, y2 = p[0], p[0] - p[1], q[0], q[0] - q[1]
        same = (x1 - x2) % 2 == 0 and (y1 - y2) % 2 == 0
        swapped = (x1 - y2) % 2 == 0 and (y1 - x2) % 2 == 0
        return x1 * x1 + y1 * y1 == x2 * x2 + y2 * y2 and (same or swapped)

    search = _r_search()
    assert all(corrected(p, q) == found for (p, q), found in search.items())
    assert sum(search.values()) > len(R_PARAMS)


# -- 8 ----------------------------------------------------------------------------

@crit(8, "stored p1 of X, Y, S3xS4 are pairwise distinct mod 24")
def test_c8_reference_invariants():
    tags = ["X", "Y", "S3xS4"]
    recs = {t: reference_topology(t) for t in tags}
    assert {t: abs(recs[t].p1) for t in tags} == {"X": 4, "Y": 8, "S3xS4": 0}
    for s, t in [("X", "Y"), ("X", "S3xS4"), ("Y", "S3xS4")]:
        assert p1_mod24_obstruction(recs[s], recs[t]) is not None, (s, t)


# -- 9 ----------------------------------------------------------------------------

SIGNATURES = {
    6: ["\t2\t\t\t\t\t\t\tS^3xS^3",
        "1\t1\t1\t\t\t1\t\t\tS^2xS^4",
        "2\t1\t\t1\t\t\t\t\tS^2xCP^2",
        "3\t3\t\t\t\t\t\t\tS^2xS^2xS^2"],
    7: ["\t1\t1\t\t\t1\t\t\tS^3xS^4",
        "1\t1\t\t1\t\t\t\t\tS^2xS^5 or CP^2xS^3",
        "2\t3\t\t\t\t\t\t\tS^2xS^2xS^3"],
}

PAIRS = {
    6: [("SU(2)^2", "1"), ("SU(4)xSU(2)", "SU(3)xSU(2)xS^1"), ("Sp(2)xSU(2)", "SU(2)^2xS^1"),
        ("SO(7)xSU(2)", "G2xSU(2)xS^1"), ("SO(8)xSU(2)", "SO(7)xSU(2)xS^1"), ("SU(3)", "T^2"),
        ("SU(3)xSU(2)", "SU(2)xT^2"), ("SU(4)xSU(2)", "Sp(2)xT^2"), ("SU(2)^3", "T^3")],
    7: [("SU(4)xSU(2)", "SU(3)xSU(2)"), ("Sp(2)xSU(2)", "SU(2)^2"), ("SO(7)xSU(2)", "G2xSU(2)"),
        ("SO(8)xSU(2)", "SO(7)xSU(2)"), ("SU(3)", "S^1"), ("SU(3)xSU(2)", "SU(2)xS^1"),
        ("SU(4)xSU(2)", "Sp(2)xS^1"), ("SU(2)^3", "T^2")],
}


def _section(text, head):
    body = text.split(f"## {head}\n", 1)[1]
    return [ln for ln in body.split("\n## ", 1)[0].splitlines() if ln]


@crit(9, "report reproduces the signature and (G, H) tables byte-stably")
@pytest.mark.parametrize("n", [6, 7])
def test_c9_report_tables(n):
    text = cmd_report(n)
    assert text == cmd_report(n)
    sig = _section(text, f"signatures (dimension {n})")
    assert sig[1:] == SIGNATURES[n]
    rows = [ln.split("\t") for ln in _section(text, f"pairs (dimension {n})")[1:]]
    assert [tuple(r[:2]) for r in rows if not r[0].startswith("#")] == PAIRS[n]


# -- 10 ---------------------------------------------------------------------------

def _literal_rule(a, b, c):
    m = 2 * gcd(3 * a, b)
    if gcd(gcd(a, b), c) != 1 or (m != 0 if c == 0 else m % c):
        return None
    if c % 2:
        return "S4xS2"
    return "S2xS4" if a % 2 == 0 or b % 2 == 0 else "S4xhatS2"


def _fixture_rows():
    rows = []
    for line in (FIXTURES / "s2s4_tuples.txt").read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            a, b, c, v = line.split()
            rows.append(((int(a), int(b), int(c)), None if v == "not-free" else v))
    return rows


@crit(10, "family-condition verdicts on the 50-tuple fixture")
def test_c10_s2s4_verdicts():
    rows = _fixture_rows()
    assert len(rows) == 50
    assert {v for _, v in rows} == {None, "S4xS2", "S2xS4", "S4xhatS2"}
    for t, expected in rows:
        assert _literal_rule(*t) == expected, t
        got = check_family_conditions("s2s4/su4", t)
        assert got.effectively_free == (expected is not None), t
        assert got.verdict == expected, t
