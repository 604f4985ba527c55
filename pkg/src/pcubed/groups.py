"""The five groups of order p^3 as explicit multiplication tables.

Elements are normal-form exponent tuples mapped to dense indices, with the
full product table precomputed, so every downstream loop pays O(1) per
product.  Automorphisms and normal abelian subgroups are found by brute
force over generator images, pruned by element orders and the defining
relations; a map of generators satisfying the relations extends uniquely to
a homomorphism, which is an automorphism iff its image array is a
permutation.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations

import numpy as np

from .modular import is_prime

GROUP_TABLE_MAX_P = 13
BRUTE_FORCE_MAX_ORDER = 343


class Family(Enum):
    CYCLIC = "cyclic"
    P2XP = "p2xp"
    ELEM_ABELIAN = "elem_abelian"
    HEISENBERG = "heisenberg"
    GP = "gp"

    @staticmethod
    def parse(name: str) -> "Family":
        for fam in Family:
            if fam.value == name or fam.name.lower() == name.lower():
                return fam
        raise ValueError(f"unknown family {name!r}")


FAMILIES = tuple(Family)


def _radices(family: Family, p: int) -> tuple[int, ...]:
    return {
        Family.CYCLIC: (p**3,),
        Family.P2XP: (p**2, p),
        Family.ELEM_ABELIAN: (p, p, p),
        Family.HEISENBERG: (p, p, p),
        Family.GP: (p**2, p),
    }[family]


def _gen_labels(family: Family) -> tuple[str, ...]:
    # aligned with normal-form exponent positions
    return {
        Family.CYCLIC: ("x",),
        Family.P2XP: ("x", "y"),
        Family.ELEM_ABELIAN: ("x1", "x2", "x3"),
        Family.HEISENBERG: ("A", "B", "C"),
        Family.GP: ("b", "a"),
    }[family]


def _mul_exps(family: Family, p: int, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
    """Vectorized normal-form product; e1, e2 broadcastable (..., k) arrays."""
    if family is Family.CYCLIC:
        return (e1 + e2) % p**3
    if family is Family.ELEM_ABELIAN:
        return (e1 + e2) % p
    if family is Family.P2XP:
        out = e1 + e2
        out[..., 0] %= p**2
        out[..., 1] %= p
        return out
    if family is Family.HEISENBERG:
        # (A^i1 B^j1 C^k1)(A^i2 B^j2 C^k2) = A^(i1+i2) B^(j1+j2) C^(k1+k2-i2*j1)
        out = np.empty(np.broadcast(e1, e2).shape, dtype=np.int64)
        out[..., 0] = (e1[..., 0] + e2[..., 0]) % p
        out[..., 1] = (e1[..., 1] + e2[..., 1]) % p
        out[..., 2] = (e1[..., 2] + e2[..., 2] - e2[..., 0] * e1[..., 1]) % p
        return out
    if family is Family.GP:
        # (b^i1 a^j1)(b^i2 a^j2) = b^(i1 + i2*(p+1)^j1) a^(j1+j2)
        pw = np.array([pow(p + 1, j, p**2) for j in range(p)], dtype=np.int64)
        out = np.empty(np.broadcast(e1, e2).shape, dtype=np.int64)
        out[..., 0] = (e1[..., 0] + e2[..., 0] * pw[e1[..., 1]]) % p**2
        out[..., 1] = (e1[..., 1] + e2[..., 1]) % p
        return out
    raise ValueError(family)


def _relations(family: Family, p: int) -> list[list[tuple[str, int]]]:
    """Defining relations as words (label, exponent); each must evaluate to e."""
    comm = lambda u, v: [(u, 1), (v, 1), (u, -1), (v, -1)]
    if family is Family.CYCLIC:
        return [[("x", p**3)]]
    if family is Family.P2XP:
        return [[("x", p**2)], [("y", p)], comm("x", "y")]
    if family is Family.ELEM_ABELIAN:
        rels = [[(g, p)] for g in ("x1", "x2", "x3")]
        rels += [comm(u, v) for u, v in combinations(("x1", "x2", "x3"), 2)]
        return rels
    if family is Family.HEISENBERG:
        return [
            [("A", p)],
            [("B", p)],
            [("C", p)],
            comm("A", "C"),
            comm("B", "C"),
            [("A", 1), ("B", 1), ("A", -1), ("B", -1), ("C", -1)],  # ABA^-1 = BC
        ]
    if family is Family.GP:
        return [
            [("a", p)],
            [("b", p**2)],
            [("a", 1), ("b", 1), ("a", -1), ("b", -(p + 1))],  # aba^-1 = b^(p+1)
        ]
    raise ValueError(family)


# generators searched by brute force; remaining ones derived from them
_SEARCH_LABELS = {
    Family.CYCLIC: ("x",),
    Family.P2XP: ("x", "y"),
    Family.ELEM_ABELIAN: ("x1", "x2", "x3"),
    Family.HEISENBERG: ("A", "B"),  # C = [A, B]
    Family.GP: ("b", "a"),
}


@dataclass(eq=False)
class GroupTable:
    """A group of order p^3 with precomputed product/inverse tables."""

    family: Family
    p: int
    order: int
    exps: np.ndarray          # (order, k) normal-form exponents
    mul: np.ndarray           # (order, order) int32
    inv: np.ndarray           # (order,)
    identity: int
    gen_names: dict[str, int]
    gen_labels: tuple[str, ...] = field(repr=False)
    element_orders: np.ndarray = field(repr=False)

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = int(self.inv[a]), -e
        r, base = self.identity, a
        while e:
            if e & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            e >>= 1
        return r

    def commutator(self, a: int, b: int) -> int:
        ab = self.mul[a, b]
        ba = self.mul[b, a]
        return int(self.mul[ab, self.inv[ba]])

    def conjugate(self, g: int, s: int) -> int:
        return int(self.mul[self.mul[g, s], self.inv[g]])

    def evaluate_word(self, word, images: dict[str, int], target: "GroupTable | None" = None) -> int:
        tgt = target or self
        r = tgt.identity
        for label, e in word:
            r = tgt.multiply(r, tgt.power(images[label], e))
        return r

    def extend_by_images(self, images: dict[str, int], target: "GroupTable | None" = None) -> np.ndarray:
        """Image array of the normal-form extension g1^e1...gk^ek -> im1^e1...imk^ek."""
        tgt = target or self
        acc = np.full(self.order, tgt.identity, dtype=np.int64)
        for pos, label in enumerate(self.gen_labels):
            tab = tgt._power_table(images[label], int(self.exps[:, pos].max()) + 1)
            acc = tgt.mul[acc, tab[self.exps[:, pos]]]
        return acc

    def _power_table(self, a: int, n: int) -> np.ndarray:
        tab = np.empty(n, dtype=np.int64)
        tab[0] = self.identity
        for e in range(1, n):
            tab[e] = self.mul[tab[e - 1], a]
        return tab

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    def word(self, a: int) -> str:
        """Render an element as a word in the generators, 'e' for the identity."""
        parts = []
        for pos, label in enumerate(self.gen_labels):
            e = int(self.exps[a, pos])
            if e == 1:
                parts.append(label)
            elif e > 1:
                parts.append(f"{label}^{e}")
        return "*".join(parts) if parts else "e"

    def closure(self, seed) -> frozenset:
        """Subgroup generated by the given element indices."""
        elems = {self.identity}
        frontier = [self.identity]
        gens = [int(g) for g in seed]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    v = int(self.mul[h, g])
                    if v not in elems:
                        elems.add(v)
                        nxt.append(v)
            frontier = nxt
        return frozenset(elems)

    def validate(self) -> None:
        """Exhaustive group-axiom and presentation checks (order <= 343 for associativity)."""
        n = self.order
        if n != self.p**3:
            raise AssertionError("order != p^3")
        if not np.array_equal(self.mul[self.identity, :], np.arange(n)):
            raise AssertionError("identity fails on the left")
        if not np.array_equal(self.mul[:, self.identity], np.arange(n)):
            raise AssertionError("identity fails on the right")
        if not np.all(self.mul[np.arange(n), self.inv] == self.identity):
            raise AssertionError("inverses fail")
        if n <= BRUTE_FORCE_MAX_ORDER:
            for a in range(n):
                if not np.array_equal(self.mul[self.mul[a, :], :], self.mul[a, self.mul]):
                    raise AssertionError(f"associativity fails at element {a}")
        images = dict(self.gen_names)
        for word in _relations(self.family, self.p):
            if self.evaluate_word(word, images) != self.identity:
                raise AssertionError(f"defining relation {word} fails")


@lru_cache(maxsize=None)
def build_group(family: Family, p: int, max_p: int = GROUP_TABLE_MAX_P) -> GroupTable:
    """Construct and validate one of the five groups of order p^3."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p > max_p:
        raise ValueError(f"p={p} above the group-table bound {max_p}")
    family = Family(family)
    radices = _radices(family, p)
    order = int(np.prod(radices))
    k = len(radices)
    grids = np.meshgrid(*[np.arange(r, dtype=np.int64) for r in radices], indexing="ij")
    exps = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(k, dtype=np.int64)
    for i in range(k - 2, -1, -1):
        weights[i] = weights[i + 1] * radices[i + 1]

    mul = np.empty((order, order), dtype=np.int32)
    chunk = max(1, (1 << 22) // order)
    for lo in range(0, order, chunk):
        hi = min(order, lo + chunk)
        prod = _mul_exps(family, p, exps[lo:hi, None, :], exps[None, :, :])
        mul[lo:hi] = prod @ weights

    identity = 0
    inv = np.argmax(mul == identity, axis=1).astype(np.int64)

    labels = _gen_labels(family)
    gen_names = {}
    for pos, label in enumerate(labels):
        e = np.zeros(k, dtype=np.int64)
        e[pos] = 1
        gen_names[label] = int(e @ weights)

    orders = _element_orders(mul, identity, p)
    G = GroupTable(
        family=family,
        p=p,
        order=order,
        exps=exps,
        mul=mul,
        inv=inv,
        identity=identity,
        gen_names=gen_names,
        gen_labels=labels,
        element_orders=orders,
    )
    G.validate()
    return G


def _element_orders(mul: np.ndarray, identity: int, p: int) -> np.ndarray:
    n = mul.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    orders[identity] = 1
    cur = np.arange(n)
    step = 1
    while np.any(orders == 0):
        # raise everything to the p-th power
        nxt = cur
        for _ in range(p - 1):
            nxt = mul[nxt, cur]
        cur = nxt
        step *= p
        fresh = (orders == 0) & (cur == identity)
        orders[fresh] = step
    return orders


def center(G: GroupTable) -> frozenset:
    mask = np.all(G.mul == G.mul.T, axis=1)
    return frozenset(int(i) for i in np.flatnonzero(mask))


@dataclass(eq=False)
class GroupMorphism:
    """A homomorphism stored as a full image array over the source."""

    source: GroupTable
    target: GroupTable
    gen_images: tuple[int, ...]  # aligned with source.gen_labels
    image: np.ndarray

    def __call__(self, a: int) -> int:
        return int(self.image[a])

    def is_bijective(self) -> bool:
        return np.unique(self.image).size == self.source.order

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """self after other."""
        img = self.image[other.image]
        gi = tuple(int(img[other.source.gen_names[l]]) for l in other.source.gen_labels)
        return GroupMorphism(other.source, self.target, gi, img)

    def inverse(self) -> "GroupMorphism":
        inv_img = np.empty_like(self.image)
        inv_img[self.image] = np.arange(self.image.size)
        gi = tuple(int(inv_img[self.target.gen_names[l]]) for l in self.target.gen_labels)
        return GroupMorphism(self.target, self.source, gi, inv_img)

    def key(self) -> bytes:
        return self.image.astype(np.int32).tobytes()

    def __eq__(self, other):
        return isinstance(other, GroupMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _search_images(G: GroupTable, H: GroupTable, find_all: bool):
    """Backtracking search for relation-preserving bijective generator images."""
    labels = _SEARCH_LABELS[G.family]
    relations = _relations(G.family, G.p)
    derived = {}
    if G.family is Family.HEISENBERG:
        derived = {"C": ("A", "B")}

    def available(assigned):
        have = set(assigned) | {d for d, (u, v) in derived.items() if u in assigned and v in assigned}
        return have

    rel_by_depth = []
    for depth in range(1, len(labels) + 1):
        have = available(labels[:depth])
        rel_by_depth.append([w for w in relations if all(l in have for l, _ in w)])
    for depth in range(len(labels) - 1, 0, -1):
        seen = {id(w) for lst in rel_by_depth[:depth] for w in lst}
        rel_by_depth[depth] = [w for w in rel_by_depth[depth] if id(w) not in seen]

    candidates = {}
    for label in labels:
        want = G.element_order(G.gen_names[label])
        candidates[label] = [int(i) for i in np.flatnonzero(H.element_orders == want)]

    found = []

    def extend(depth, images):
        if depth == len(labels):
            full = dict(images)
            for d, (u, v) in derived.items():
                full[d] = H.commutator(full[u], full[v])
            img = G.extend_by_images(full, target=H)
            if np.unique(img).size != G.order:
                return False
            gi = tuple(full[l] for l in G.gen_labels)
            found.append(GroupMorphism(G, H, gi, img))
            return not find_all
        label = labels[depth]
        for cand in candidates[label]:
            images[label] = cand
            trial = dict(images)
            for d, (u, v) in derived.items():
                if u in trial and v in trial:
                    trial[d] = H.commutator(trial[u], trial[v])
            ok = all(
                G.evaluate_word(w, trial, target=H) == H.identity for w in rel_by_depth[depth]
            )
            if ok and extend(depth + 1, images):
                return True
            del images[label]
        return False

    extend(0, {})
    return found


def enumerate_automorphisms(G: GroupTable) -> list[GroupMorphism]:
    """Complete automorphism list by pruned brute force, in deterministic order."""
    if G.order > BRUTE_FORCE_MAX_ORDER:
        raise ValueError(f"order {G.order} above brute-force bound {BRUTE_FORCE_MAX_ORDER}")
    return _search_images(G, G, find_all=True)


def are_isomorphic(G: GroupTable, H: GroupTable) -> bool:
    """Generator-image search for a multiplication-preserving bijection."""
    if G.order > BRUTE_FORCE_MAX_ORDER or H.order > BRUTE_FORCE_MAX_ORDER:
        raise ValueError("order above brute-force bound")
    if G.order != H.order:
        return False
    if sorted(G.element_orders.tolist()) != sorted(H.element_orders.tolist()):
        return False
    return bool(_search_images(G, H, find_all=False))


@dataclass(frozen=True)
class SubgroupClass:
    """An Aut(G)-equivalence class of normal abelian subgroups."""

    isomorphism_type: tuple[int, ...]
    representative: frozenset
    members: tuple[frozenset, ...]
    generator_words: tuple[str, ...]


def _abelian_type(G: GroupTable, S: frozenset) -> tuple[int, ...]:
    size = len(S)
    p = G.p
    exponent = max(G.element_order(s) for s in S)
    if size == p:
        return (p,)
    if size == p**2:
        return (p**2,) if exponent == p**2 else (p, p)
    if size == p**3:
        if exponent == p**3:
            return (p**3,)
        if exponent == p**2:
            return (p**2, p)
        return (p, p, p)
    raise ValueError(f"unexpected subgroup size {size}")


def _minimal_generators(G: GroupTable, S: frozenset) -> tuple[int, ...]:
    members = sorted(S)
    for g in members:
        if len(G.closure([g])) == len(S):
            return (g,)
    for g in members:
        for h in members:
            if h <= g:
                continue
            if len(G.closure([g, h])) == len(S):
                return (g, h)
    return tuple(members)  # not reached for order <= p^2


def normal_abelian_subgroups(G: GroupTable) -> list[frozenset]:
    """All proper nontrivial normal abelian subgroups, sorted for determinism."""
    n = G.order
    subgroups = {G.closure([g]) for g in range(n) if g != G.identity}
    small = [g for g in range(n) if G.element_order(g) <= G.p**2 and g != G.identity]
    for g, h in combinations(small, 2):
        S = G.closure([g, h])
        if len(S) < n:
            subgroups.add(S)
    out = []
    for S in subgroups:
        if not 1 < len(S) < n:
            continue
        mem = sorted(S)
        abelian = all(G.mul[a, b] == G.mul[b, a] for a, b in combinations(mem, 2))
        if not abelian:
            continue
        normal = all(G.conjugate(g, s) in S for g in range(n) for s in mem)
        if not normal:
            continue
        out.append(S)
    return sorted(out, key=lambda S: (len(S), sorted(S)))


def normal_abelian_subgroup_classes(
    G: GroupTable, automorphisms: list[GroupMorphism] | None = None
) -> list[SubgroupClass]:
    """Partition the normal abelian subgroups into Aut(G)-equivalence classes."""
    subgroups = normal_abelian_subgroups(G)
    if automorphisms is None:
        automorphisms = enumerate_automorphisms(G)
    unassigned = set(subgroups)
    classes = []
    for S in subgroups:
        if S not in unassigned:
            continue
        idx = np.fromiter(S, dtype=np.int64)
        orbit = {frozenset(int(v) for v in sigma.image[idx]) for sigma in automorphisms}
        unassigned -= orbit
        members = tuple(sorted(orbit, key=sorted))
        rep = min(members, key=sorted)
        gens = _minimal_generators(G, rep)
        classes.append(
            SubgroupClass(
                isomorphism_type=_abelian_type(G, rep),
                representative=rep,
                members=members,
                generator_words=tuple(G.word(g) for g in gens),
            )
        )
    return sorted(classes, key=lambda c: (len(c.representative), c.isomorphism_type, sorted(c.representative)))
