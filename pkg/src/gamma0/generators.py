"""Independent generating systems read off a maximal polygon.

The side-pairing matrices of a maximal polygon generate Gamma0(n); dropping
one member of each inverse pair (keeping the left source side) leaves an
independent system in Rademacher's sense: T, one order-2 element per even
side, one order-3 element per odd side, and one infinite-order element per
glued side pair.  The counts land exactly on the group invariants: v2 order-2
generators, v3 order-3, and 2·genus + v_inf − 1 of infinite order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .invariants import group_invariants
from .polygon import EVEN, ODD, VERTICAL, LabeledPolygon, is_maximal, side_pairing_system
from .psl2 import Mat, T, element_order, in_gamma0, inverse


@dataclass(frozen=True)
class Generator:
    matrix: Mat
    kind: str  # translation | even | odd | paired
    order: int | None  # 2, 3, or None for infinite
    source: int  # index of the side the matrix transports
    target: int

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix.rows()], "kind": self.kind, "order": self.order}


@dataclass(frozen=True)
class GeneratingSystem:
    n: int
    generators: tuple[Generator, ...]

    def counts(self) -> dict[str, int]:
        by_order = {"order2": 0, "order3": 0, "infinite": 0}
        for g in self.generators:
            if g.order == 2:
                by_order["order2"] += 1
            elif g.order == 3:
                by_order["order3"] += 1
            else:
                by_order["infinite"] += 1
        return by_order

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [g.to_json() for g in self.generators]}


def independent_system(P: LabeledPolygon) -> GeneratingSystem:
    """Maximal inverse-free subset of the side-pairing system of P.

    T comes from the two vertical sides; every even or odd side contributes
    its own torsion element; every glued pair contributes the transport of
    its left member (the right member's matrix is the inverse and is
    dropped).
    """
    if not is_maximal(P):
        raise ValueError("polygon has free sides; grow it before extracting generators")
    m = len(P.labels)
    gens = [Generator(T, "translation", None, 0, m - 1)]
    for i, j, g in side_pairing_system(P):
        lab = P.labels[i]
        if lab == VERTICAL:
            continue  # both vertical entries are powers of T, already counted
        if lab == EVEN:
            gens.append(Generator(g, "even", 2, i, i))
        elif lab == ODD:
            gens.append(Generator(g, "odd", 3, i, i))
        elif j > i:
            gens.append(Generator(g, "paired", None, i, j))
    sys = GeneratingSystem(P.n, tuple(gens))
    inv = group_invariants(P.n)
    got = sys.counts()
    want = {"order2": inv.v2, "order3": inv.v3, "infinite": 2 * inv.genus + inv.v_inf - 1}
    assert got == want, f"free-factor counts {got} != {want} at n={P.n}"
    return sys


@dataclass
class VerificationReport:
    n: int
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    entries: list[int] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.failures.append(msg)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ok": self.ok,
            "failures": self.failures,
            "counts": self.counts,
            "entries": self.entries,
        }


def verify_system(
    sys: GeneratingSystem,
    expect_entry: int | None = None,
    twin: tuple[int, int] | None = None,
) -> VerificationReport:
    """Check every claim made about a generating system; never raises.

    Always checked: membership in Gamma0(n), presence of T, inverse-freeness,
    the trace bound |tr g| ≤ c−2 and the Frobenius bound ‖g‖² < (2c−1)² for
    every non-translation (c its own lower-left entry), torsion orders
    matching the side kinds, and the free-factor counts against the group
    invariants.  ``expect_entry=n`` additionally pins every non-translation
    entry to n (optimal construction); ``twin=(p, q)`` allows {n, 2n} with
    exactly q−p generators at 2n.
    """
    n = sys.n
    rep = VerificationReport(n=n)
    mats = [g.matrix for g in sys.generators]
    if T not in mats:
        rep.fail("translation T is missing")
    for idx, g in enumerate(sys.generators):
        m = g.matrix
        if not in_gamma0(m, n):
            rep.fail(f"generator {idx} {m.rows()} is not in Gamma0({n})")
        order = element_order(m)
        expected = {"translation": math.inf, "even": 2, "odd": 3, "paired": math.inf}[g.kind]
        if order != expected:
            rep.fail(f"generator {idx} has order {order}, kind {g.kind} demands {expected}")
        if g.kind == "translation":
            continue
        c = m.c
        rep.entries.append(c)
        if c <= 0:
            rep.fail(f"generator {idx} has non-positive lower-left entry {c}")
            continue
        if abs(m.a + m.d) > c - 2:
            rep.fail(f"generator {idx} breaks the trace bound: |{m.a + m.d}| > {c} - 2")
        frob = m.a**2 + m.b**2 + m.c**2 + m.d**2
        if frob >= (2 * c - 1) ** 2:
            rep.fail(f"generator {idx} breaks the Frobenius bound: {frob} >= {(2 * c - 1) ** 2}")
    position = {m: i for i, m in enumerate(mats)}
    for j, m in enumerate(mats):
        i = position.get(inverse(m))
        if i is not None and i < j:
            rep.fail(f"generators {i} and {j} are mutually inverse")

    inv = group_invariants(n)
    rep.counts = sys.counts()
    want = {"order2": inv.v2, "order3": inv.v3, "infinite": 2 * inv.genus + inv.v_inf - 1}
    if rep.counts != want:
        rep.fail(f"free-factor counts {rep.counts} != {want}")

    if expect_entry is not None:
        bad = [c for c in rep.entries if c != expect_entry]
        if bad:
            rep.fail(f"entries {bad} differ from expected {expect_entry}")
    if twin is not None:
        p, q = twin
        lo, hi = p * q, 2 * p * q
        bad = [c for c in rep.entries if c not in (lo, hi)]
        if bad:
            rep.fail(f"entries {bad} outside {{{lo}, {hi}}}")
        doubled = sum(1 for c in rep.entries if c == hi)
        if doubled != q - p:
            rep.fail(f"{doubled} generators at entry {hi}, twin split demands {q - p}")
    return rep


def cusp_class_count(P: LabeledPolygon) -> int:
    """Number of cusp orbits after gluing P's boundary; must equal v_inf.

    Union-find over the polygon cusps: T glues 0 to 1, an even or odd side
    glues its two endpoints (for odd sides via the square of the rotation),
    and a glued pair matches endpoints crosswise.
    """
    m = len(P.cusps)
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    union(1, m - 1)  # T: 0 -> 1; the cusp at infinity pairs with itself
    seen = set()
    for i, lab in enumerate(P.labels):
        if lab == VERTICAL or i in seen:
            continue
        if lab in (EVEN, ODD):
            union(i, i + 1)
            seen.add(i)
        else:
            j = P.partner(i)
            union(i, j + 1)
            union(i + 1, j)
            seen.update((i, j))
    return len({find(x) for x in range(m)})
