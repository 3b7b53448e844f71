"""Denominator triples and the polygon constructions built on them.

A *level-n Farey triple* is a cyclic triple of coprime positive pairs
(a_i, b_i), i = 0,1,2, pairwise distinct, satisfying the relation

    a_{i+1} a_i + (a_{i+1} + b_{i+1}) b_i = n      (indices mod 3)

for every i.  Attaching one ideal triangle to the free side with
denominators (a_i, b_i) of each member of a triple produces three new sides
that glue onto each other, which is how free sides of the hull of F*_⌊√n⌋
get resolved when n is a prime or a prime square, and for close twin-prime
products.

Every triple satisfies a_i + b_i = b_{i+1} + a_{i+2} and 3A² < 4n for its
smallest pair sum A; the triples coming from free hull sides additionally
have A > √n, and those are the ones k(n) counts.  The level is *cashew* when
some triple attains A = ⌊√(4n/3)⌋; certificates (s, t, a, b) encode such
triples arithmetically via n = s·a + t·b with s+t > a > t ≥ b ≥ a−s, and are
searched for directly, independently of the triple enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .farey import Frac, INF, farey_sequence, mediant, pair_from_denominators
from .invariants import is_prime, prime_or_prime_square, twin_factors
from .polygon import LabeledPolygon, polygon_from_cusps, is_maximal


class TripleNotApplicable(ValueError):
    """The free side admits no level-n Farey triple (possible for general n)."""


Pair = tuple[int, int]


@dataclass(frozen=True)
class FareyTriple:
    """Cyclic triple of denominator pairs, stored in a fixed rotation."""

    pairs: tuple[Pair, Pair, Pair]

    def sums(self) -> tuple[int, int, int]:
        return tuple(a + b for a, b in self.pairs)

    def min_sum(self) -> int:
        return min(self.sums())

    def __iter__(self):
        return iter(self.pairs)


def _relation_holds(t: FareyTriple, n: int) -> bool:
    p = t.pairs
    for i in range(3):
        a, b = p[i]
        a_next, b_next = p[(i + 1) % 3]
        if a_next * a + (a_next + b_next) * b != n:
            return False
    return True


def is_farey_triple(t: FareyTriple, n: int) -> bool:
    p = t.pairs
    if len(set(p)) != 3:
        return False
    for a, b in p:
        if a < 1 or b < 1 or gcd(a, b) != 1:
            return False
    return _relation_holds(t, n)


def canonical_rotation(t: FareyTriple) -> FareyTriple:
    """Rotate so the head has the minimal sum and its successor a larger one.

    For a valid triple exactly one rotation qualifies: the sums cannot be all
    equal (the triple would degenerate), so the minimum is attained once or
    twice, and when twice the two positions are cyclically adjacent.
    """
    s = t.sums()
    lo = min(s)
    picks = [r for r in range(3) if s[r] == lo and s[(r + 1) % 3] > lo]
    if len(picks) != 1:
        raise ValueError(f"no canonical rotation for sums {s}")
    r = picks[0]
    return FareyTriple((t.pairs[r], t.pairs[(r + 1) % 3], t.pairs[(r + 2) % 3]))


def complete_triple(a0: int, b0: int, a1: int, b1: int, n: int) -> FareyTriple | None:
    """Complete two related pairs to a triple, or None when they coincide.

    Requires the relation a1·(a0+b0) + b1·b0 = n.  The third pair is then
    forced: (a2, b2) = (a0 + b0 - b1, a1 + b1 - a0).  Returns None in the
    degenerate case (a0, b0) = (a1, b1), where the "triple" collapses to a
    single self-related pair.  Raises if the forced completion is not a valid
    triple (that can happen for inputs that do not come from free sides).
    """
    for x in (a0, b0, a1, b1):
        if x < 1:
            raise ValueError("pair entries must be positive")
    if a1 * (a0 + b0) + b1 * b0 != n:
        raise ValueError(f"pairs ({a0},{b0}), ({a1},{b1}) are not related at level {n}")
    if (a0, b0) == (a1, b1):
        return None
    t = FareyTriple(((a0, b0), (a1, b1), (a0 + b0 - b1, a1 + b1 - a0)))
    if not is_farey_triple(t, n):
        raise ValueError(f"completion {t.pairs} is not a level-{n} Farey triple")
    return t


def _window_solution(n: int, a: int, b: int, v: int) -> Pair | None:
    """The unique solution of ax + by = n with v-b < x <= v, if positive.

    Returns (x, y) or None when the windowed x gives a non-positive or
    non-integral y.
    """
    if b == 1:
        x = v
    else:
        a_mod = a % b
        if gcd(a_mod, b) != 1:
            return None
        x0 = n * pow(a_mod, -1, b) % b
        x = v - (v - x0) % b
    if x < 1:
        return None
    rem = n - a * x
    if rem < b or rem % b:
        return None
    return x, rem // b


def triple_from_free_side(n: int, side: Pair) -> FareyTriple:
    """The canonical triple through the free side with denominators (a, b).

    Solves ax + by = n in the two windows v-b < x ≤ v and v-a < y ≤ v
    (v = ⌊√n⌋) and assembles the neighbours from those solutions.  Raises
    TripleNotApplicable when no valid triple exists through this side —
    guaranteed not to happen for free hull sides at prime and prime-square
    levels, but possible in general.
    """
    a, b = side
    v = isqrt(n)
    if a < 1 or b < 1 or gcd(a, b) != 1:
        raise ValueError(f"({a}, {b}) is not a coprime positive pair")
    if a > v or b > v:
        raise ValueError(f"({a}, {b}) exceeds the hull bound {v} for level {n}")

    right = _window_solution(n, a, b, v)  # x2 in (v-b, v]
    left = _window_solution(n, b, a, v)  # y0 in (v-a, v], by symmetry
    if right is None or left is None:
        raise TripleNotApplicable(f"side ({a},{b}) has no triple at level {n}")
    x2, y2 = right
    y0, x0 = left
    if y2 <= x2 or x0 <= y0:
        raise TripleNotApplicable(f"side ({a},{b}) has no triple at level {n}")
    raw = FareyTriple(((x0 - y0, y0), (a, b), (x2, y2 - x2)))
    if not is_farey_triple(raw, n):
        raise TripleNotApplicable(f"side ({a},{b}) has no triple at level {n}")
    return canonical_rotation(raw)


def _canonical_heads(n: int, head_sum: int):
    """Yield canonical triples of level n whose head sum equals head_sum.

    The head (a0, b0) of a canonical triple determines everything: with
    A = a0 + b0, the relation forces a1·A ≡ n (mod b0), and each admissible
    a1 pins b1 = (n - a1·A)/b0 and the completion (a2, b2).  Minimality of
    the head sum demands a1 + b1 > A and a2 + b2 >= A.
    """
    A = head_sum
    for b0 in range(1, A):
        if gcd(A, b0) != 1:
            continue
        a0 = A - b0
        if b0 == 1:
            start = 1
        else:
            start = n * pow(A % b0, -1, b0) % b0
            if start == 0:
                start = b0
        for a1 in range(start, (n - b0) // A + 1, b0):
            b1 = (n - a1 * A) // b0
            if a1 + b1 <= A:
                continue
            a2, b2 = A - b1, a1 + b1 - a0
            if a2 < 1 or b2 < 1 or a2 + b2 < A:
                continue
            if gcd(a1, b1) != 1 or gcd(a2, b2) != 1:
                continue
            pairs = ((a0, b0), (a1, b1), (a2, b2))
            if len(set(pairs)) != 3:
                continue
            t = FareyTriple(pairs)
            assert _relation_holds(t, n)
            yield t


def _free_side_triples(n: int):
    """Canonical triples with head sum > √n (3A² < 4n always holds)."""
    A = isqrt(n) + 1
    while 3 * A * A < 4 * n:
        yield from _canonical_heads(n, A)
        A += 1


def canonical_triples(n: int, head_sum: int | None = None) -> list[FareyTriple]:
    """Canonical-rotation triples of level n.

    With head_sum given, every triple whose minimal pair sum equals it
    (whatever that sum is); otherwise only the triples with head sum > √n,
    which are the ones realized by free hull sides and counted by k(n).
    """
    if n < 2:
        raise ValueError("level must be at least 2")
    if head_sum is not None:
        return list(_canonical_heads(n, head_sum))
    return list(_free_side_triples(n))


def triple_count(n: int) -> int:
    """k(n): the number of level-n Farey triples with minimal sum > √n.

    This equals the number of extra triangles needed on top of the hull of
    F*_⌊√n⌋: u(n) = Φ(⌊√n⌋) + triple_count(n) whenever the free sides of
    the hull all carry triples (primes, prime squares, and more).
    """
    if n < 2:
        raise ValueError("level must be at least 2")
    return sum(1 for _ in _free_side_triples(n))


@dataclass(frozen=True)
class CashewCertificate:
    """Witness (s, t, a, b) that the level attains the ⌊√(4n/3)⌋ ceiling.

    n = s·a + t·b with s+t > a = ⌊√(4n/3)⌋ > t ≥ b ≥ a−s, and the encoded
    triple ((a−b, b), (s, t), (a−t, s+t−a+b)) is valid with minimal pair
    sum a.  (For n ≥ 37 one even has a−s ≥ 1, but requiring that would
    wrongly reject small levels like 5, whose only certificate has s = a.)
    """

    s: int
    t: int
    a: int
    b: int

    def triple(self) -> FareyTriple:
        s, t, a, b = self.s, self.t, self.a, self.b
        return FareyTriple(((a - b, b), (s, t), (a - t, s + t - a + b)))

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "a": self.a, "b": self.b}


def cashew_ceiling(n: int) -> int:
    """⌊√(4n/3)⌋, the largest possible minimal pair sum of a triple."""
    return isqrt(4 * n // 3)


def cashew_certificates(n: int) -> list[CashewCertificate]:
    """All certificates, ordered by descending s then ascending t.

    Plain brute force over the arithmetic condition; candidates whose
    encoded triple is invalid (possible only through a common factor, at
    composite levels) are dropped so that a certificate exists exactly when
    some triple attains the ceiling.  That equivalence is what the tests
    cross-check against the triple enumeration.
    """
    if n < 2:
        raise ValueError("level must be at least 2")
    a = cashew_ceiling(n)
    certs = []
    if a >= 2:
        for s in range((n - 1) // a, 0, -1):
            rem = n - s * a
            if rem < 1:
                continue
            for t in range(max(1, a - s + 1), a):
                if rem % t:
                    continue
                b = rem // t
                if b > t or b < a - s:
                    continue
                cert = CashewCertificate(s=s, t=t, a=a, b=b)
                if is_farey_triple(cert.triple(), n):
                    certs.append(cert)
    return certs


def cashew_certificate(n: int) -> CashewCertificate | None:
    """First certificate in the search order, or None when not cashew."""
    certs = cashew_certificates(n)
    return certs[0] if certs else None


def _hull(n: int, v: int) -> LabeledPolygon:
    return polygon_from_cusps(n, farey_sequence(v))


def _triples_of_free_sides(P: LabeledPolygon) -> dict[FareyTriple, list[int]]:
    """Group the free sides of P by the canonical triple through them."""
    grouped: dict[FareyTriple, list[int]] = {}
    for i in P.free_sides():
        t = triple_from_free_side(P.n, P.side_denominators(i))
        grouped.setdefault(t, []).append(i)
    for t, sides in grouped.items():
        if len(sides) != 3:
            raise TripleNotApplicable(
                f"triple {t.pairs} covers {len(sides)} free sides, expected 3"
            )
    return grouped


def _with_mediants(P: LabeledPolygon, side_pairs: list[Pair]) -> LabeledPolygon:
    """Reclassified polygon with one mediant inserted on each listed side."""
    extra = []
    for a, b in side_pairs:
        left, right = pair_from_denominators(a, b)
        extra.append(mediant(left, right))
    finite = sorted(list(P.cusps[1:]) + extra)
    return polygon_from_cusps(P.n, [INF] + finite)


def build_optimal_polygon(n: int) -> LabeledPolygon:
    """Maximal polygon with all denominators ≤ ⌊√(4n/3)⌋, n prime or p².

    Takes the hull of F*_⌊√n⌋ and resolves each free side by attaching the
    triangle fan of its triple: one mediant on the head side of each triple
    is enough, because the two sides it creates glue onto the triple's other
    two members.
    """
    if not prime_or_prime_square(n):
        raise ValueError(f"{n} is not a prime or the square of a prime")
    hull = _hull(n, isqrt(n))
    grouped = _triples_of_free_sides(hull)
    P = _with_mediants(hull, [t.pairs[0] for t in grouped])
    assert is_maximal(P), f"optimal construction left free sides at n={n}"
    bound = cashew_ceiling(n)
    assert P.max_denominator() <= bound, f"denominator bound {bound} broken at n={n}"
    return P


def twin_eligible(p: int, q: int) -> bool:
    """p < q odd primes with √q − √p < √2."""
    return (
        2 < p < q
        and is_prime(p)
        and is_prime(q)
        and (q - p - 2) ** 2 < 8 * p
    )


def build_twin_polygon(p: int, q: int) -> LabeledPolygon:
    """Maximal polygon for n = pq, p < q odd primes with √q − √p < √2.

    Start from the hull of F*_v, v = p + k - 1 with k = (q-p)/2.  The hull
    sides with denominator pairs (k, p) and (i, q-i) for k < i < p+k are
    free; they get resolved by mediant insertions of denominator q (the
    (k, p) side needs two: its first mediant p+k leaves a (k, p+k) piece
    that splits again at q).  Any remaining free sides carry ordinary
    triples.  All denominators end up ≤ max(⌊√(4n/3)⌋, q).
    """
    if not twin_eligible(p, q):
        raise ValueError(f"({p}, {q}) is not an eligible odd prime pair")
    n = p * q
    k = (q - p) // 2
    v = p + k - 1
    hull = _hull(n, v)
    free_dens = {hull.side_denominators(i) for i in hull.free_sides()}
    a_sides = {(k, p), (p, k)} | {(i, q - i) for i in range(k + 1, p + k)}
    missing = a_sides - free_dens
    if missing:
        raise RuntimeError(f"expected free sides {sorted(missing)} at n={n}")

    extra: list[Frac] = []
    # (k, p): split at the mediant, then split the left piece again at
    # denominator q.  (p, k) stays unsplit; each middle side splits once.
    left, right = pair_from_denominators(k, p)
    m1 = mediant(left, right)
    extra += [m1, mediant(left, m1)]
    for i in range(k + 1, p + k):
        li, ri = pair_from_denominators(i, q - i)
        extra.append(mediant(li, ri))

    grouped: dict[FareyTriple, list[Pair]] = {}
    for dens in sorted(free_dens - a_sides):
        t = triple_from_free_side(n, dens)
        grouped.setdefault(t, []).append(dens)
    for t, members in grouped.items():
        if len(members) != 3:
            raise RuntimeError(f"triple {t.pairs} covers {len(members)} sides at n={n}")
        a0, b0 = t.pairs[0]
        lt, rt = pair_from_denominators(a0, b0)
        extra.append(mediant(lt, rt))

    finite = sorted(list(hull.cusps[1:]) + extra)
    P = polygon_from_cusps(n, [INF] + finite)
    assert is_maximal(P), f"twin construction left free sides at n={n}"
    bound = max(cashew_ceiling(n), q)
    assert P.max_denominator() <= bound, f"denominator bound {bound} broken at n={n}"
    return P
