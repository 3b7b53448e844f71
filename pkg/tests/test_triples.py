"""Farey triples, cashew certificates, and the two direct constructions."""

from math import gcd, isqrt

import pytest

from gamma0.farey import farey_sequence
from gamma0.invariants import group_invariants, totient_summatory
from gamma0.polygon import is_maximal, polygon_from_cusps
from gamma0.triples import (
    CashewCertificate,
    FareyTriple,
    TripleNotApplicable,
    build_optimal_polygon,
    build_twin_polygon,
    canonical_rotation,
    canonical_triples,
    cashew_ceiling,
    cashew_certificate,
    cashew_certificates,
    complete_triple,
    is_farey_triple,
    triple_count,
    triple_from_free_side,
    twin_eligible,
)


def brute_triples(n):
    """Every level-n triple by brute force over the defining relation."""
    found = set()
    for a0 in range(1, n):
        for b0 in range(1, n - a0 + 1):
            if gcd(a0, b0) != 1:
                continue
            head = a0 + b0
            for a1 in range(1, (n - b0) // head + 1):
                rem = n - a1 * head
                if rem % b0:
                    continue
                b1 = rem // b0
                if b1 < 1 or gcd(a1, b1) != 1:
                    continue
                a2, b2 = head - b1, a1 + b1 - a0
                if a2 < 1 or b2 < 1:
                    continue
                t = FareyTriple(((a0, b0), (a1, b1), (a2, b2)))
                if is_farey_triple(t, n):
                    found.add(canonical_rotation(t))
    return found


# --- triples ---


def test_is_farey_triple():
    t = FareyTriple(((5, 2), (5, 3), (4, 3)))  # level 41
    assert is_farey_triple(t, 41)
    assert not is_farey_triple(t, 43)
    assert not is_farey_triple(FareyTriple(((5, 2), (5, 2), (4, 3))), 41)
    assert not is_farey_triple(FareyTriple(((5, 2), (5, 3), (0, 3))), 41)


def test_triple_identity_and_rotation():
    t = canonical_rotation(FareyTriple(((5, 3), (4, 3), (5, 2))))
    assert t.min_sum() == t.sums()[0]
    # the cyclic identity a_i + b_i = b_{i+1} + a_{i+2}
    p = t.pairs
    for i in range(3):
        a_i, b_i = p[i]
        _, b_next = p[(i + 1) % 3]
        a_prev, _ = p[(i + 2) % 3]
        assert a_i + b_i == b_next + a_prev


def test_complete_triple():
    t = complete_triple(5, 2, 5, 3, 41)
    assert t is not None and is_farey_triple(t, 41)
    assert (5, 2) in t.pairs and (5, 3) in t.pairs
    # the degenerate self-related pair gives no triple: (1,1) at n=3
    assert complete_triple(1, 1, 1, 1, 3) is None
    with pytest.raises(ValueError):
        complete_triple(5, 2, 5, 3, 40)  # relation does not hold
    with pytest.raises(ValueError):
        complete_triple(0, 2, 5, 3, 10)


@pytest.mark.parametrize("n", [7, 11, 17, 24, 29, 41, 60, 97])
def test_enumeration_matches_brute_force(n):
    brute = brute_triples(n)
    lib = set()
    for head_sum in range(1, n):
        lib.update(canonical_triples(n, head_sum=head_sum))
    assert lib == brute
    v = isqrt(n)
    free = {t for t in brute if t.min_sum() > v}
    assert set(canonical_triples(n)) == free
    assert triple_count(n) == len(free)


def test_triple_count_equals_u_minus_phi_on_primes():
    for n in [p for p in range(2, 400) if all(p % d for d in range(2, isqrt(p) + 1))]:
        u = group_invariants(n).u
        assert triple_count(n) == u - totient_summatory(isqrt(n)), n


def test_triple_from_free_side():
    # the two free sides of the hull at level 41 carry the two k(41) triples
    P = polygon_from_cusps(41, farey_sequence(6))
    free = P.free_sides()
    assert len(free) == 6  # two triples, three sides each
    triples = {triple_from_free_side(41, P.side_denominators(i)) for i in free}
    assert triples == set(canonical_triples(41))
    for i in free:
        dens = P.side_denominators(i)
        t = triple_from_free_side(41, dens)
        assert dens in t.pairs or (dens[1], dens[0]) in t.pairs
        assert t.min_sum() > 6


def test_triple_from_free_side_errors():
    with pytest.raises(ValueError):
        triple_from_free_side(41, (2, 4))  # not coprime
    with pytest.raises(ValueError):
        triple_from_free_side(41, (7, 2))  # beyond the hull bound 6
    with pytest.raises(TripleNotApplicable):
        triple_from_free_side(6, (1, 2))  # composite level without a triple


# --- cashew certificates ---


def test_cashew_ceiling():
    assert cashew_ceiling(41) == 7
    assert cashew_ceiling(97) == 11
    assert cashew_ceiling(3) == 2
    for n in range(2, 500):
        assert cashew_ceiling(n) == isqrt(4 * n // 3)


def test_cashew_certificate_fixtures():
    assert cashew_certificate(41) == CashewCertificate(s=5, t=3, a=7, b=2)
    assert cashew_certificate(5) == CashewCertificate(s=2, t=1, a=2, b=1)
    assert cashew_certificates(97) == [
        CashewCertificate(s=7, t=5, a=11, b=4),
        CashewCertificate(s=5, t=7, a=11, b=6),
    ]
    for n in (7, 13, 19, 29, 31, 37):
        assert cashew_certificate(n) is None, n


def test_cashew_certificate_consistency():
    for n in range(2, 400):
        cert = cashew_certificate(n)
        if cert is None:
            continue
        a = cashew_ceiling(n)
        assert cert.a == a
        assert cert.s * cert.a + cert.t * cert.b == n
        t = cert.triple()
        assert is_farey_triple(t, n)
        assert canonical_rotation(t).min_sum() == a


def test_cashew_equivalence_with_triple_enumeration():
    # a certificate exists exactly when some triple attains the ceiling
    for n in range(2, 300):
        attained = any(
            t.min_sum() == cashew_ceiling(n)
            for t in canonical_triples(n, head_sum=cashew_ceiling(n))
        )
        assert (cashew_certificate(n) is not None) == attained, n


# --- the optimal construction ---


@pytest.mark.parametrize("n", [2, 3, 5, 7, 17, 41, 49, 97, 121, 169, 293])
def test_build_optimal_polygon(n):
    P = build_optimal_polygon(n)
    assert is_maximal(P)
    assert P.max_denominator() <= cashew_ceiling(n)
    assert len(P.cusps) - 2 == group_invariants(n).u


def test_build_optimal_polygon_rejects_general_levels():
    with pytest.raises(ValueError):
        build_optimal_polygon(8)
    with pytest.raises(ValueError):
        build_optimal_polygon(15)


# --- the twin construction ---


def test_twin_eligible():
    assert twin_eligible(11, 13)
    assert twin_eligible(3, 5)
    assert twin_eligible(3, 7)
    assert not twin_eligible(3, 11)
    assert not twin_eligible(2, 3)  # even prime excluded
    assert not twin_eligible(13, 11)  # order matters
    assert not twin_eligible(9, 11)  # 9 is not prime


@pytest.mark.parametrize("p,q", [(3, 5), (5, 7), (11, 13), (17, 19)])
def test_build_twin_polygon(p, q):
    P = build_twin_polygon(p, q)
    n = p * q
    assert P.n == n
    assert is_maximal(P)
    assert P.max_denominator() <= max(cashew_ceiling(n), q)
    assert len(P.cusps) - 2 == group_invariants(n).u


def test_build_twin_polygon_rejects_bad_pairs():
    with pytest.raises(ValueError):
        build_twin_polygon(3, 11)
    with pytest.raises(ValueError):
        build_twin_polygon(2, 3)
