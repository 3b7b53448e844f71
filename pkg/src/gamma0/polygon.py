"""Normalized ideal polygons for Gamma0(n) and the triangle-growing algorithm.

A polygon is stored as its ordered cusp list [∞, 0, ..., 1] together with one
label per side; side i runs from cusps[i] to cusps[i+1], and the last side
wraps from the cusp 1 back to ∞.  Labels use the classical Farey-symbol
encoding:

    1     the two vertical sides, glued to each other by z -> z+1
    -2    even: the side is glued to itself by an order-2 element
    -3    odd: the exterior triangle is rotated onto itself, order 3
    -4    free: the polygon can still grow through this side
    k>=2  paired: the two sides carrying the same index are glued together

Classification depends only on the endpoint denominators (a, b) of a side:
even iff n | a²+b², odd iff n | a²+ab+b², and sides (a,b), (c,d) are glued
iff n | ac+bd.  The even/odd/paired cases are mutually exclusive, and a side
satisfying any of them is terminal: only sides in relation with nothing on
the boundary may be expanded.  Growth therefore terminates in a maximal
polygon — with exactly u(n) triangles — whatever order free sides are
expanded in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .farey import Frac, INF, ZERO, ONE, mediant, is_farey_pair
from .psl2 import Mat, T, edge_transport, inverse, in_gamma0

VERTICAL = 1
EVEN = -2
ODD = -3
FREE = -4


@dataclass(frozen=True)
class LabeledPolygon:
    """An ideal polygon with classified sides (a Farey symbol when maximal)."""

    n: int
    cusps: tuple[Frac, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("level must be at least 2")
        c = self.cusps
        if len(c) < 3 or c[0] != INF or c[1] != ZERO or c[-1] != ONE:
            raise ValueError("cusps must run [∞, 0, ..., 1]")
        if len(self.labels) != len(c):
            raise ValueError("need exactly one label per side")
        if self.labels[0] != VERTICAL or self.labels[-1] != VERTICAL:
            raise ValueError("the two vertical sides carry label 1")
        for x, y in zip(c[1:], c[2:]):
            if not x < y or not is_farey_pair(x, y):
                raise ValueError(f"cusps {x}, {y} do not form an increasing Farey pair")

    def __len__(self) -> int:
        return len(self.cusps)

    def side(self, i: int) -> tuple[Frac, Frac]:
        """Endpoints of side i (the last side wraps around to ∞)."""
        m = len(self.cusps)
        return self.cusps[i % m], self.cusps[(i + 1) % m]

    def side_denominators(self, i: int | None = None):
        """Denominator pairs of the non-vertical sides, left to right.

        With an index, just that side's pair.
        """
        if i is not None:
            left, right = self.side(i)
            return left.den, right.den
        c = self.cusps
        return [(c[j].den, c[j + 1].den) for j in range(1, len(c) - 1)]

    def denominator_sequence(self) -> list[int]:
        return [c.den for c in self.cusps]

    def free_sides(self) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == FREE]

    def partner(self, i: int) -> int:
        """Index of the side glued to side i (i itself for even/odd sides)."""
        lab = self.labels[i]
        if lab == FREE:
            raise ValueError("free sides are not glued")
        if lab in (EVEN, ODD):
            return i
        if lab == VERTICAL:
            return len(self.cusps) - 1 if i == 0 else 0
        return next(j for j, l in enumerate(self.labels) if l == lab and j != i)

    def max_denominator(self) -> int:
        return max(c.den for c in self.cusps)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cusps": [str(c) for c in self.cusps],
            "labels": list(self.labels),
        }


def polygon_from_json(data: dict) -> LabeledPolygon:
    cusps = tuple(Frac.parse(s) for s in data["cusps"])
    return LabeledPolygon(int(data["n"]), cusps, tuple(int(x) for x in data["labels"]))


def classify_side(
    n: int, side_denoms: tuple[int, int], all_side_denoms: list[tuple[int, int]]
) -> tuple[str, tuple[int, int] | None]:
    """Classify one side among a collection of candidate partner sides.

    Returns ('even', None), ('odd', None), ('paired', (c, d)) with the
    partner's denominators, or ('free', None).  The side itself is skipped
    when it occurs in the list.  Precedence even > odd > paired mirrors the
    fact that the four cases are mutually exclusive on legal polygons.
    """
    a, b = side_denoms
    if (a * a + b * b) % n == 0:
        return "even", None
    if (a * a + a * b + b * b) % n == 0:
        return "odd", None
    for c, d in all_side_denoms:
        if (c, d) == (a, b):
            continue
        if (a * c + b * d) % n == 0:
            return "paired", (c, d)
    return "free", None


def _classify_all(n: int, cusps: tuple[Frac, ...]) -> list[int]:
    """Labels for every side of the polygon with the given cusps.

    Vectorized over the full side list: one even/odd pass and one dense
    dot-product matrix for the pairing relation.  Partners are matched
    greedily left to right; a side may satisfy the congruence with several
    others (the candidates are then interchangeable), so the first free
    match wins.
    """
    m = len(cusps)
    k = m - 2  # number of non-vertical sides
    if k == 0:
        return [VERTICAL, VERTICAL]
    a = np.fromiter((cusps[i].den for i in range(1, m - 1)), np.int64, k)
    b = np.fromiter((cusps[i].den for i in range(2, m)), np.int64, k)
    assert a.max(initial=0) < 2**31 and b.max(initial=0) < 2**31
    even = (a * a + b * b) % n == 0
    odd = (a * a + a * b + b * b) % n == 0
    assert not (even & odd).any(), "even and odd classification must be exclusive"
    odd &= ~even
    unresolved = ~(even | odd)
    dots = np.outer(a, a) + np.outer(b, b)
    linked = (dots % n == 0) & unresolved[:, None] & unresolved[None, :]
    np.fill_diagonal(linked, False)

    labels = np.full(k, FREE, np.int64)
    labels[even] = EVEN
    labels[odd] = ODD
    next_index = 2
    for i in range(k):
        if labels[i] != FREE:
            continue
        js = np.flatnonzero(linked[i] & (labels == FREE))
        js = js[js != i]
        if js.size == 0:
            continue
        j = int(js[0])
        labels[i] = labels[j] = next_index
        next_index += 1
    return [VERTICAL, *map(int, labels), VERTICAL]


def polygon_from_cusps(n: int, cusps) -> LabeledPolygon:
    """Build a LabeledPolygon from a cusp list, classifying all sides."""
    cusps = tuple(cusps)
    return LabeledPolygon(n, cusps, tuple(_classify_all(n, cusps)))


def base_polygon(n: int) -> LabeledPolygon:
    """The starting triangle (∞, 0, 1) with its single classified side."""
    return polygon_from_cusps(n, (INF, ZERO, ONE))


def attach_triangle(P: LabeledPolygon, side_index: int) -> LabeledPolygon:
    """Grow P through a free side by inserting the mediant cusp.

    The polygon stays legal (the attached Farey triangle is interior-disjoint
    from every translate of P), and all sides are re-classified since the two
    new sides may glue onto formerly free ones.
    """
    if P.labels[side_index] != FREE:
        raise ValueError(f"side {side_index} is not free")
    x, y = P.side(side_index)
    cusps = P.cusps[: side_index + 1] + (mediant(x, y),) + P.cusps[side_index + 1 :]
    return polygon_from_cusps(P.n, cusps)


def is_maximal(P: LabeledPolygon) -> bool:
    """A polygon is maximal exactly when it has no free side left."""
    return FREE not in P.labels


def _assemble(n: int, denoms: list[int], tags: list[tuple]) -> LabeledPolygon:
    """Build the final polygon from emitted denominators and side tags.

    ``denoms`` is the full denominator sequence [0, 1, ..., 1]; ``tags`` has
    one entry per non-vertical side: ('even',), ('odd',), or
    ('paired', sid, partner_sid).  Pair indices are assigned 2, 3, ... in
    order of each pair's left member.
    """
    # Chain the cusp numerators: consecutive cusps r/s < u/t satisfy us-rt=1.
    cusps = [INF, ZERO]
    r, s = 0, 1
    for t in denoms[2:]:
        u, rem = divmod(1 + r * t, s)
        assert rem == 0, "denominator chain broke: not a Farey pair sequence"
        cusps.append(Frac(u, t))
        r, s = u, t
    assert cusps[-1] == ONE

    labels = [VERTICAL]
    pair_index: dict[int, int] = {}
    nxt = 2
    for tag in tags:
        if tag[0] == "even":
            labels.append(EVEN)
        elif tag[0] == "odd":
            labels.append(ODD)
        else:
            _, sid, partner = tag
            if sid not in pair_index:
                pair_index[sid] = pair_index[partner] = nxt
                nxt += 1
            labels.append(pair_index[sid])
    labels.append(VERTICAL)
    return LabeledPolygon(n, tuple(cusps), tuple(labels))


def _grow_leftmost(n: int, _trace: list | None = None) -> LabeledPolygon:
    """Expand the first free side in cusp order until no free side remains.

    Every side is classified the moment it is created, against all coexisting
    unresolved sides; pairing is a forced move (a side satisfying the gluing
    congruence with a coexisting side is never free), so which side gets
    expanded is fully determined and new sides only ever appear where the
    leftmost free side was just subdivided.  A single left-to-right cursor
    therefore visits each side once; everything left of it is resolved for
    good.  Sides live on a singly linked list in boundary order.

    All congruence tests use denominator residues mod n, kept in flat int64
    arrays so the scan over open sides is one vectorized pass that can never
    overflow; the exact denominators ride along as Python ints (at composite
    levels — n=144 is the first — leftmost growth is correct but balloons
    far past machine range before the last free sides pair off).

    When several open sides satisfy the congruence at once, any two
    candidates (A1,B1), (A2,B2) have n | A1*B2 - A2*B1, so a future side
    gluable to one is gluable to the other: no choice blocks completion.  We
    glue onto the boundary-leftmost candidate.
    """
    if n >= 2**31:
        raise ValueError("level too large for the vectorized growth engine")
    cap = 256
    res_a = np.empty(cap, np.int64)  # left denominator mod n
    res_b = np.empty(cap, np.int64)  # right denominator mod n
    open_ = np.zeros(cap, bool)
    nxt = [-1] * cap
    tags: list[tuple | None] = [None] * cap
    den_a = [0] * cap  # exact left denominator
    den_b = [0] * cap  # exact right denominator
    num_l = [0] * cap  # exact left-cusp numerator; num_l/den_a orders the boundary
    count = 0

    def alloc(a: int, b: int, p: int) -> int:
        nonlocal cap, count, res_a, res_b, open_
        if count == cap:
            cap *= 2
            res_a = np.resize(res_a, cap)
            res_b = np.resize(res_b, cap)
            open_ = np.resize(open_, cap)
            open_[count:] = False
            nxt.extend([-1] * (cap - count))
            tags.extend([None] * (cap - count))
            den_a.extend([0] * (cap - count))
            den_b.extend([0] * (cap - count))
            num_l.extend([0] * (cap - count))
        i = count
        count += 1
        res_a[i] = a % n
        res_b[i] = b % n
        den_a[i] = a
        den_b[i] = b
        num_l[i] = p
        return i

    def classify(i: int, sibling: int = -1) -> None:
        ra = int(res_a[i])
        rb = int(res_b[i])
        if (ra * ra + rb * rb) % n == 0:
            tags[i] = ("even",)
            return
        if (ra * ra + ra * rb + rb * rb) % n == 0:
            tags[i] = ("odd",)
            return
        if count <= 64:
            cands = [
                j
                for j in range(count)
                if open_[j] and (int(res_a[j]) * ra + int(res_b[j]) * rb) % n == 0
            ]
        else:
            mask = open_[:count] & ((res_a[:count] * ra + res_b[:count] * rb) % n == 0)
            cands = [int(j) for j in np.flatnonzero(mask)]
        if sibling >= 0 and (int(res_a[sibling]) * ra + int(res_b[sibling]) * rb) % n == 0:
            cands.append(sibling)
        if cands:
            # leftmost on the boundary: smallest left cusp num_l/den_a
            hit = cands[0]
            for j in cands[1:]:
                if num_l[j] * den_a[hit] < num_l[hit] * den_a[j]:
                    hit = j
            tags[i] = ("paired", i, hit)
            tags[hit] = ("paired", hit, i)
            open_[hit] = False
        else:
            open_[i] = True

    head = alloc(0, 0, 0)  # sentinel, never open
    first = alloc(1, 1, 0)  # the side from 0/1 to 1/1
    nxt[head] = first
    classify(first)

    budget = 6 * n + 64  # expansions are bounded by the triangle count u(n)
    prev, cur = head, first
    while cur != -1:
        if not open_[cur]:
            prev, cur = cur, nxt[cur]
            continue
        budget -= 1
        if budget < 0:
            raise RuntimeError(f"polygon growth did not terminate at level {n}")
        a = den_a[cur]
        b = den_b[cur]
        if _trace is not None:
            _trace.append((a, b))
        open_[cur] = False  # subdivided away, no longer a side
        p = num_l[cur]
        mnum = p + (p * b + 1) // a  # mediant numerator: left num + right num
        left = alloc(a, a + b, p)
        right = alloc(a + b, b, mnum)
        nxt[prev] = left
        nxt[left] = right
        nxt[right] = nxt[cur]
        classify(left, sibling=right)
        if tags[right] is None:
            classify(right)
        cur = left  # same predecessor; re-examine from the left child

    denoms = [0, 1]
    out_tags: list[tuple] = []
    i = nxt[head]
    while i != -1:
        denoms.append(den_b[i])
        out_tags.append(tags[i])
        i = nxt[i]
    return _assemble(n, denoms, out_tags)


def _grow_smallest_mediant(n: int) -> LabeledPolygon:
    """Eager strategy: keep every side classified, then repeatedly expand the
    free side whose mediant denominator is smallest, rightmost on ties."""
    sides: list[dict] = []

    def classify(entry: dict) -> None:
        a, b = entry["a"], entry["b"]
        if (a * a + b * b) % n == 0:
            entry["tag"] = ("even",)
        elif (a * a + a * b + b * b) % n == 0:
            entry["tag"] = ("odd",)
        else:
            for other in sides:
                if other is entry or other["tag"] is not None:
                    continue
                if (a * other["a"] + b * other["b"]) % n == 0:
                    entry["tag"] = ("paired", entry["sid"], other["sid"])
                    other["tag"] = ("paired", other["sid"], entry["sid"])
                    return
            entry["tag"] = None  # free

    def add(pos: int, a: int, b: int, sid: int) -> None:
        sides.insert(pos, {"a": a, "b": b, "sid": sid, "tag": "new"})

    add(0, 1, 1, 0)
    sides[0]["tag"] = None
    classify(sides[0])
    next_sid = 1
    budget = 6 * n + 64

    while True:
        free = [i for i, e in enumerate(sides) if e["tag"] is None]
        if not free:
            break
        best = max(free, key=lambda i: (-(sides[i]["a"] + sides[i]["b"]), i))
        budget -= 1
        if budget < 0:
            raise RuntimeError(f"polygon growth did not terminate at level {n}")
        e = sides.pop(best)
        a, b = e["a"], e["b"]
        add(best, a, a + b, next_sid)
        add(best + 1, a + b, b, next_sid + 1)
        left, right = sides[best], sides[best + 1]
        next_sid += 2
        left["tag"] = None
        right["tag"] = None
        classify(left)
        if right["tag"] is None:
            classify(right)

    denoms = [0, 1] + [e["b"] for e in sides]
    return _assemble(n, denoms, [e["tag"] for e in sides])


GROWTH_STRATEGIES = ("leftmost", "smallest-mediant")


def grow_maximal(n: int, strategy: str = "leftmost") -> LabeledPolygon:
    """Grow the base triangle into a maximal Gamma0(n) polygon.

    Termination is guaranteed whatever the strategy: each expansion adds one
    ideal triangle and a maximal polygon contains exactly u(n) of them.  The
    result is deterministic for a fixed strategy.
    """
    if n < 2:
        raise ValueError("level must be at least 2")
    if strategy == "leftmost":
        P = _grow_leftmost(n)
    elif strategy == "smallest-mediant":
        P = _grow_smallest_mediant(n)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; use one of {GROWTH_STRATEGIES}")
    assert is_maximal(P)
    return P


def side_pairing_system(P: LabeledPolygon) -> list[tuple[int, int, Mat]]:
    """The full side-pairing rule of a maximal polygon.

    One entry (i, j, g) per side: g carries side i onto side j reversed
    (j = i for even and odd sides, where g is the torsion element of the
    side; the vertical pair is glued by the unit translation).  The set is
    closed under inverses and lands in Gamma0(n).
    """
    if not is_maximal(P):
        raise ValueError("side pairing is defined for maximal polygons only")
    m = len(P.cusps)
    pending: dict[int, int] = {}
    mate: dict[int, int] = {}
    for i, lab in enumerate(P.labels):
        if lab >= 2:
            if lab in pending:
                j = pending.pop(lab)
                mate[i], mate[j] = j, i
            else:
                pending[lab] = i
    entries: list[tuple[int, int, Mat]] = []
    for i, lab in enumerate(P.labels):
        p1, p2 = P.side(i)
        if lab == VERTICAL:
            if i == 0:
                entries.append((0, m - 1, T))
            else:
                entries.append((m - 1, 0, inverse(T)))
            continue
        if lab == EVEN:
            g = edge_transport((p1, p2), (p2, p1))
        elif lab == ODD:
            mid = mediant(p1, p2)
            g = edge_transport((p1, mid), (mid, p2))
        else:
            j = mate[i]
            q1, q2 = P.side(j)
            g = edge_transport((p1, p2), (q2, q1))
            entries.append((i, j, g))
            continue
        entries.append((i, i, g))
    assert all(in_gamma0(g, P.n) for _, _, g in entries)
    return entries
