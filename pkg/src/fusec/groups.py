"""Finite groups as dense multiplication tables.

Elements are the integers ``0 .. order-1`` with ``0`` the identity.  Subgroups
and homomorphisms refer to a parent table by index, so every operation below is
a sequence of table lookups.  Tie-breaking is always by the element-index
order: subgroup lists are sorted by ``(order, elements)`` and "canonical"
choices are lexicographically least.
"""
from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import (GroupTooLarge, InputError, LatticeTooLarge, NotASubgroup)

DEFAULT_GROUP_BOUND = 512
DEFAULT_LATTICE_BOUND = 64
DEFAULT_AUT_BOUND = 64

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations

def check_perm(perm: Sequence[int], degree: int) -> Perm:
    perm = tuple(int(x) for x in perm)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise InputError(f"invalid permutation: {list(perm)} on {degree} points")
    return perm


def perm_mul(a: Perm, b: Perm) -> Perm:
    """Composite ``a∘b``: apply ``b`` first."""
    return tuple(a[i] for i in b)


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def cycle_string(perm: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class PermutationOrigin:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its full multiplication table."""

    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    origin: PermutationOrigin | None = None
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{tag} order={self.order}>"

    def product(self, a: int, b: int) -> int:
        return self.table[a][b]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse[x], -k
        out = 0
        t = self.table
        for _ in range(k):
            out = t[out][x]
        return out

    @cached_property
    def np_table(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        t = self.table
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = t[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)), _irredundant_generators(self, range(self.order)))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, (0,), ())

    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    def is_p_group(self, p: int) -> bool:
        return _is_power_of(self.order, p)

    def conj(self, g: int, x: int) -> int:
        """``g x g⁻¹``."""
        t = self.table
        return t[t[g][x]][self.inverse[g]]

    def check_axioms(self) -> None:
        """Exhaustive identity / inverse / associativity check."""
        _check_table(self.table, self.inverse)


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _check_table(table, inverse) -> None:
    n = len(table)
    T = np.asarray(table, dtype=np.int64)
    if T.shape != (n, n):
        raise InputError("Cayley table must be square")
    if T.min() < 0 or T.max() >= n:
        raise InputError("Cayley table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
        raise InputError("index 0 is not a two-sided identity")
    for row in T:
        if len(set(row.tolist())) != n:
            raise InputError("Cayley table row is not a permutation")
    inv = np.asarray(inverse)
    if not np.all(T[inv, ar] == 0):
        raise InputError("inverse table is wrong")
    # associativity, chunked over the first argument
    for a in range(n):
        if not np.array_equal(T[T[a]][:, :], T[a][T]):
            raise InputError(f"table is not associative (first failure at a={a})")


def from_cayley(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                name: str = "", bound: int = DEFAULT_GROUP_BOUND) -> FiniteGroup:
    n = len(table)
    if n == 0:
        raise InputError("empty Cayley table")
    if n > bound:
        raise GroupTooLarge(f"group too large: order {n} > bound {bound}")
    tab = tuple(tuple(int(x) for x in row) for row in table)
    inverse = []
    for a in range(n):
        try:
            inverse.append(tab[a].index(0))
        except ValueError:
            raise InputError(f"element {a} has no inverse") from None
    _check_table(tab, inverse)
    return FiniteGroup(tab, tuple(inverse), tuple(labels) if labels else None, None, name)


def from_generators(generators: Sequence[Hashable], mul: Callable, identity: Hashable,
                    bound: int = DEFAULT_GROUP_BOUND,
                    label: Callable[[Hashable], str] | None = None,
                    name: str = "") -> tuple[FiniteGroup, list]:
    """Close ``generators`` under ``mul``; returns the group and its element list.

    Elements are numbered in breadth-first order from the identity, multiplying
    on the right by the generators in the given order.
    """
    elements = [identity]
    index = {identity: 0}
    i = 0
    while i < len(elements):
        x = elements[i]
        for s in generators:
            y = mul(x, s)
            if y not in index:
                if len(elements) >= bound:
                    raise GroupTooLarge(f"group too large: closure exceeds bound {bound}")
                index[y] = len(elements)
                elements.append(y)
        i += 1
    n = len(elements)
    table = tuple(tuple(index[mul(a, b)] for b in elements) for a in elements)
    inverse = tuple(row.index(0) for row in table)
    labels = tuple(label(x) for x in elements) if label else None
    return FiniteGroup(table, inverse, labels, None, name), elements


def from_permutation_generators(degree: int, generators: Sequence[Sequence[int]],
                                bound: int = DEFAULT_GROUP_BOUND,
                                name: str = "") -> FiniteGroup:
    """Group generated by permutations of ``{0..degree-1}``.

    The product is composition with the right factor applied first.
    """
    if degree < 1:
        raise InputError("degree must be positive")
    gens = tuple(check_perm(g, degree) for g in generators)
    identity = tuple(range(degree))
    G, elements = from_generators(gens, perm_mul, identity, bound, cycle_string, name)
    origin = PermutationOrigin(degree, gens, tuple(elements))
    return FiniteGroup(G.table, G.inverse, G.labels, origin, name)


# ---------------------------------------------------------------------------
# subgroups

def _closure(G: FiniteGroup, gens: Iterable[int], start: Iterable[int] = (0,)) -> list[int]:
    t = G.table
    gens = [g for g in gens if g != 0]
    elems = list(dict.fromkeys([0, *start]))
    seen = set(elems)
    i = 0
    while i < len(elems):
        x = elems[i]
        row = t[x]
        for s in gens:
            y = row[s]
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    return elems


def _irredundant_generators(G: FiniteGroup, elements: Iterable[int]) -> tuple[int, ...]:
    gens: list[int] = []
    have = {0}
    for x in sorted(elements):
        if x not in have:
            gens.append(x)
            have = set(_closure(G, gens))
    return tuple(gens)


def _mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


class Subgroup:
    """A subgroup of ``parent`` stored as its sorted element indices."""

    __slots__ = ("parent", "elements", "generators", "_cache")

    def __init__(self, parent: FiniteGroup, elements: Iterable[int],
                 generators: Iterable[int] | None = None):
        self.parent = parent
        self.elements = tuple(sorted(set(elements)))
        self.generators = (tuple(generators) if generators is not None
                           else _irredundant_generators(parent, self.elements))
        self._cache: dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def mask(self) -> int:
        m = self._cache.get("mask")
        if m is None:
            m = self._cache["mask"] = _mask(self.elements)
        return m

    @property
    def element_set(self) -> frozenset[int]:
        s = self._cache.get("set")
        if s is None:
            s = self._cache["set"] = frozenset(self.elements)
        return s

    @property
    def position(self) -> dict[int, int]:
        pos = self._cache.get("pos")
        if pos is None:
            pos = self._cache["pos"] = {x: i for i, x in enumerate(self.elements)}
        return pos

    def __contains__(self, x: int) -> bool:
        return (self.mask >> x) & 1 == 1

    def __le__(self, other: Subgroup) -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.order < other.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent!r} gens={list(self.generators)}>"

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.order, self.elements)

    def as_group(self) -> FiniteGroup:
        """Standalone copy: element ``i`` of the result is ``elements[i]``."""
        g = self._cache.get("group")
        if g is None:
            pos = self.position
            t = self.parent.table
            table = tuple(tuple(pos[t[a][b]] for b in self.elements) for a in self.elements)
            inverse = tuple(pos[self.parent.inverse[a]] for a in self.elements)
            labels = (tuple(self.parent.labels[a] for a in self.elements)
                      if self.parent.labels else None)
            g = FiniteGroup(table, inverse, labels, None, "")
            self._cache["group"] = g
        return g

    def inclusion(self) -> GroupHom:
        """Embedding of ``as_group()`` into the parent."""
        G = self.as_group()
        return GroupHom(G.whole, self.parent.whole, self.elements)

    def subgroups(self, bound: int = DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
        return _enumerate_subgroups(self.parent, self, bound)

    def is_abelian(self) -> bool:
        t = self.parent.table
        g = self.generators
        return all(t[a][b] == t[b][a] for i, a in enumerate(g) for b in g[i + 1:])

    def is_normal_in(self, other: Subgroup) -> bool:
        return normalizer(other, self) == other

    def index_in(self, other: Subgroup) -> int:
        return other.order // self.order


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Validate ``elements`` as a subgroup of ``G``."""
    elems = sorted(set(int(x) for x in elements))
    if not elems or elems[0] != 0:
        raise NotASubgroup("not a subgroup: identity missing")
    if elems[-1] >= G.order or elems[0] < 0:
        raise NotASubgroup("not a subgroup: element index out of range")
    s = set(elems)
    t = G.table
    for a in elems:
        if G.inverse[a] not in s:
            raise NotASubgroup("not a subgroup: not closed under inverse")
        row = t[a]
        for b in elems:
            if row[b] not in s:
                raise NotASubgroup("not a subgroup: not closed under product")
    if G.order % len(elems):
        raise NotASubgroup("not a subgroup: order does not divide the group order")
    return Subgroup(G, elems)


def generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    return Subgroup(G, _closure(G, gens), _irredundant_generators(G, _closure(G, gens)))


def _as_subgroup(X: FiniteGroup | Subgroup) -> Subgroup:
    return X.whole if isinstance(X, FiniteGroup) else X


def _require_sub(G: Subgroup, P: Subgroup) -> None:
    if P.parent is not G.parent or not P <= G:
        raise NotASubgroup("not a subgroup")


def _enumerate_subgroups(G: FiniteGroup, universe: Subgroup, bound: int) -> list[Subgroup]:
    if universe.order > bound:
        raise LatticeTooLarge(f"lattice too large: order {universe.order} > bound {bound}")
    cyclic: dict[int, tuple[int, ...]] = {}
    cyc_gen: dict[int, int] = {}
    for x in universe.elements:
        if x == 0:
            continue
        powers = _closure(G, [x])
        m = _mask(powers)
        if m not in cyclic:
            cyclic[m] = tuple(powers)
            cyc_gen[m] = x
    found: dict[int, Subgroup] = {1: Subgroup(G, (0,), ())}
    queue = [found[1]]
    cyc_items = sorted(cyc_gen.items(), key=lambda kv: (len(cyclic[kv[0]]), kv[1]))
    while queue:
        H = queue.pop()
        hm = H.mask
        for cm, g in cyc_items:
            if cm & hm == cm:
                continue
            elems = _closure(G, [*H.generators, g], H.elements)
            m = _mask(elems)
            if m not in found:
                J = Subgroup(G, elems, (*H.generators, g))
                found[m] = J
                queue.append(J)
    return sorted(found.values(), key=lambda S: S.key)


def subgroups(G: FiniteGroup | Subgroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
    """All subgroups, sorted by order then element tuple."""
    U = _as_subgroup(G)
    return _enumerate_subgroups(U.parent, U, bound)


# ---------------------------------------------------------------------------
# classical operators

def normalizer(G: FiniteGroup | Subgroup, P: Subgroup) -> Subgroup:
    G = _as_subgroup(G)
    _require_sub(G, P)
    par = G.parent
    t, inv = par.table, par.inverse
    out = [g for g in G.elements
           if all(t[t[g][s]][inv[g]] in P for s in P.generators)]
    return Subgroup(par, out)


def centralizer(G: FiniteGroup | Subgroup, P: Subgroup) -> Subgroup:
    G = _as_subgroup(G)
    _require_sub(G, P)
    t = G.parent.table
    out = [g for g in G.elements if all(t[g][s] == t[s][g] for s in P.generators)]
    return Subgroup(G.parent, out)


def center(G: FiniteGroup | Subgroup) -> Subgroup:
    G = _as_subgroup(G)
    return centralizer(G, G)


def transporter(G: FiniteGroup | Subgroup, P: Subgroup, Q: Subgroup) -> list[int]:
    """``{g ∈ G : g P g⁻¹ ≤ Q}`` as a sorted list of element indices."""
    G = _as_subgroup(G)
    _require_sub(G, P)
    _require_sub(G, Q)
    par = G.parent
    t, inv = par.table, par.inverse
    return [g for g in G.elements
            if all(t[t[g][s]][inv[g]] in Q for s in P.generators)]


def conjugate(P: Subgroup, g: int) -> Subgroup:
    par = P.parent
    return Subgroup(par, (par.conj(g, x) for x in P.elements))


def is_p_subgroup(P: Subgroup, p: int) -> bool:
    return _is_power_of(P.order, p)


def sylow_p(G: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """The lexicographically least Sylow p-subgroup."""
    G = _as_subgroup(G)
    par = G.parent
    target = p_part(G.order, p)
    P = par.trivial
    while P.order < target:
        N = normalizer(G, P)
        grown = None
        for g in N.elements:
            if g in P:
                continue
            if par.power(g, p) in P:
                grown = Subgroup(par, _closure(par, [*P.generators, g], P.elements))
                break
        if grown is None:  # pragma: no cover - Sylow theorems guarantee growth
            raise AssertionError("failed to grow p-subgroup")
        P = grown
    best = P.elements
    for g in G.elements:
        c = tuple(sorted(par.conj(g, x) for x in P.elements))
        if c < best:
            best = c
    return Subgroup(par, best)


def sylow_subgroups(G: FiniteGroup | Subgroup, p: int) -> list[Subgroup]:
    G = _as_subgroup(G)
    S = sylow_p(G, p)
    seen = {conjugate(S, g).elements for g in G.elements}
    return [Subgroup(G.parent, e) for e in sorted(seen)]


def o_p(G: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """Largest normal p-subgroup: the intersection of all Sylow p-subgroups."""
    G = _as_subgroup(G)
    S = sylow_p(G, p)
    core = S.element_set
    for g in G.elements:
        core = core & {G.parent.conj(g, x) for x in S.elements}
    return Subgroup(G.parent, core)


def o_p_prime_generated(K: Subgroup, p: int) -> Subgroup:
    """Subgroup generated by the p′-elements of ``K`` (that is, O^p(K))."""
    orders = K.parent.element_orders
    gens = [x for x in K.elements if orders[x] % p != 0]
    return generate(K.parent, gens)


def max_p_perfect(C: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """Largest p-perfect subgroup, the fixpoint of ``K ↦ O^p(K)``."""
    K = _as_subgroup(C)
    while True:
        nxt = o_p_prime_generated(K, p)
        if nxt == K:
            return K
        K = nxt


def commutator_subgroup(G: FiniteGroup | Subgroup) -> Subgroup:
    G = _as_subgroup(G)
    par = G.parent
    t, inv = par.table, par.inverse
    comms = {t[t[a][b]][t[inv[a]][inv[b]]] for a in G.elements for b in G.elements}
    return generate(par, sorted(comms))


def has_p_quotient(K: Subgroup, p: int) -> bool:
    """True when the abelianization of ``K`` has nontrivial p-part."""
    D = commutator_subgroup(K)
    return (K.order // D.order) % p == 0


def thompson_subgroup(S: FiniteGroup | Subgroup, bound: int = DEFAULT_LATTICE_BOUND) -> Subgroup:
    """Subgroup generated by the abelian subgroups of maximal order."""
    S = _as_subgroup(S)
    abelian = [A for A in subgroups(S, bound) if A.is_abelian()]
    top = max(A.order for A in abelian)
    gens = [g for A in abelian if A.order == top for g in A.generators]
    return generate(S.parent, gens)


def power_subgroup(A: Subgroup, p: int) -> Subgroup:
    """``{a^p : a ∈ A}`` for abelian ``A``."""
    par = A.parent
    return Subgroup(par, {par.power(a, p) for a in A.elements})


def join(P: Subgroup, Q: Subgroup) -> Subgroup:
    return generate(P.parent, [*P.generators, *Q.generators])


def intersection(P: Subgroup, Q: Subgroup) -> Subgroup:
    return Subgroup(P.parent, P.element_set & Q.element_set)


def left_transversal(G: FiniteGroup | Subgroup, H: Subgroup) -> list[int]:
    """Least element of each left coset ``gH``, in increasing order."""
    G = _as_subgroup(G)
    t = G.parent.table
    seen: set[int] = set()
    reps = []
    for g in G.elements:
        if g in seen:
            continue
        reps.append(g)
        seen.update(t[g][h] for h in H.elements)
    return reps


# ---------------------------------------------------------------------------
# homomorphisms

class GroupHom:
    """Map ``domain → codomain`` given elementwise, aligned with ``domain.elements``."""

    __slots__ = ("domain", "codomain", "images", "_lookup")

    def __init__(self, domain: Subgroup, codomain: Subgroup, images: Sequence[int]):
        if len(images) != domain.order:
            raise InputError("image list length does not match the domain")
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(int(x) for x in images)
        self._lookup: dict[int, int] | None = None

    def __call__(self, x: int) -> int:
        if self._lookup is None:
            self._lookup = dict(zip(self.domain.elements, self.images))
        return self._lookup[x]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.domain == other.domain and self.codomain.parent is other.codomain.parent
                and self.images == other.images)

    def __hash__(self) -> int:
        return hash((self.domain.elements, self.images))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{a}->{b}" for a, b in zip(self.domain.generators,
                                                     map(self, self.domain.generators)))
        return f"<GroupHom {pairs}>"

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """``self ∘ other``."""
        return GroupHom(other.domain, self.codomain, [self(other(x)) for x in other.domain.elements])

    def image(self) -> Subgroup:
        return Subgroup(self.codomain.parent, set(self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_homomorphism(self) -> bool:
        dt = self.domain.parent.table
        ct = self.codomain.parent.table
        f = self
        return all(f(dt[a][b]) == ct[f(a)][f(b)]
                   for a in self.domain.elements for b in self.domain.elements)

    def restrict(self, P: Subgroup, codomain: Subgroup | None = None) -> GroupHom:
        return GroupHom(P, codomain or self.codomain, [self(x) for x in P.elements])

    def inverse(self) -> GroupHom:
        img = self.image()
        back = dict(zip(self.images, self.domain.elements))
        return GroupHom(img, self.domain, [back[y] for y in img.elements])

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain.parent, [x for x, y in zip(self.domain.elements, self.images)
                                             if y == 0])


def identity_hom(P: Subgroup) -> GroupHom:
    return GroupHom(P, P, P.elements)


def conjugation_hom(g: int, P: Subgroup, Q: Subgroup | None = None) -> GroupHom:
    par = P.parent
    return GroupHom(P, Q or P.parent.whole, [par.conj(g, x) for x in P.elements])


def extend_hom(src: FiniteGroup, gens: Sequence[int], images: Sequence[int],
               dst: FiniteGroup) -> dict[int, int] | None:
    """Extend generator images to ``⟨gens⟩`` or return None if inconsistent.

    Consistency on every edge of the Cayley graph of ``⟨gens⟩`` is exactly the
    condition for the assignment to define a homomorphism.
    """
    st, dtab = src.table, dst.table
    m = {0: 0}
    queue = [0]
    i = 0
    while i < len(queue):
        x = queue[i]
        fx = m[x]
        for s, v in zip(gens, images):
            y = st[x][s]
            w = dtab[fx][v]
            got = m.get(y)
            if got is None:
                m[y] = w
                queue.append(y)
            elif got != w:
                return None
        i += 1
    return m


def automorphisms(P: FiniteGroup | Subgroup, bound: int = DEFAULT_AUT_BOUND) -> list[GroupHom]:
    """All automorphisms of ``P``, by backtracking over generator images."""
    P = _as_subgroup(P)
    if P.order > bound:
        raise LatticeTooLarge(f"automorphism search too large: order {P.order} > bound {bound}")
    par = P.parent
    orders = par.element_orders
    gens = list(P.generators)
    found: list[GroupHom] = []

    def rec(k: int, imgs: list[int]) -> None:
        if k and extend_hom(par, gens[:k], imgs, par) is None:
            return
        if k == len(gens):
            m = extend_hom(par, gens, imgs, par)
            if m is not None and len(set(m.values())) == P.order and len(m) == P.order:
                found.append(GroupHom(P, P, [m[x] for x in P.elements]))
            return
        for y in P.elements:
            if orders[y] == orders[gens[k]]:
                rec(k + 1, imgs + [y])

    rec(0, [])
    found.sort(key=lambda f: f.images)
    return found


def isomorphisms(A: FiniteGroup | Subgroup, B: FiniteGroup | Subgroup,
                 first_only: bool = False) -> list[GroupHom]:
    """Brute-force isomorphisms ``A → B`` (used for identifications and tests)."""
    A, B = _as_subgroup(A), _as_subgroup(B)
    if A.order != B.order:
        return []
    pa, pb = A.parent, B.parent
    oa, ob = pa.element_orders, pb.element_orders
    gens = list(A.generators)
    found: list[GroupHom] = []

    def rec(k: int, imgs: list[int]) -> bool:
        if k:
            m = extend_hom(pa, gens[:k], imgs, pb)
            if m is None or len(set(m.values())) != len(m):
                return False
        if k == len(gens):
            m = extend_hom(pa, gens, imgs, pb)
            if len(m) == A.order and set(m.values()) == B.element_set:
                found.append(GroupHom(A, B, [m[x] for x in A.elements]))
                return first_only
            return False
        for y in B.elements:
            if ob[y] == oa[gens[k]] and rec(k + 1, imgs + [y]):
                return True
        return False

    rec(0, [])
    return found


# ---------------------------------------------------------------------------
# constructions

def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    """Element ``(a, b)`` is index ``a * |H| + b``."""
    m = H.order
    gt, ht = G.table, H.table
    table = tuple(
        tuple(gt[a][c] * m + ht[b][d] for c in range(G.order) for d in range(m))
        for a in range(G.order) for b in range(m))
    inverse = tuple(G.inverse[a] * m + H.inverse[b] for a in range(G.order) for b in range(m))
    labels = None
    if G.labels or H.labels:
        labels = tuple(f"({G.label(a)},{H.label(b)})" for a in range(G.order) for b in range(m))
    return FiniteGroup(table, inverse, labels, None, name or _prod_name(G, H))


def _prod_name(G: FiniteGroup, H: FiniteGroup) -> str:
    if G.name and H.name:
        return f"{G.name}x{H.name}"
    return ""


def product_subgroup(GH: FiniteGroup, P1: Subgroup, P2: Subgroup) -> Subgroup:
    m = P2.parent.order
    return Subgroup(GH, [a * m + b for a in P1.elements for b in P2.elements])


def quotient(G: FiniteGroup | Subgroup, N: Subgroup) -> tuple[FiniteGroup, list[int]]:
    """``G/N`` with cosets indexed by increasing least element.

    Returns the quotient group and the projection as a list indexed by the
    elements of ``G`` in the parent numbering (non-members map to -1).
    """
    G = _as_subgroup(G)
    par = G.parent
    t = par.table
    if not N <= G or not N.is_normal_in(G):
        raise NotASubgroup("quotient requires a normal subgroup")
    reps = left_transversal(G, N)
    proj = [-1] * par.order
    for i, r in enumerate(reps):
        for n in N.elements:
            proj[t[r][n]] = i
    table = tuple(tuple(proj[t[a][b]] for b in reps) for a in reps)
    inverse = tuple(proj[par.inverse[a]] for a in reps)
    labels = tuple(f"{par.label(a)}N" for a in reps) if par.labels else None
    return FiniteGroup(table, inverse, labels, None, ""), proj


def group_from_maps(maps: Sequence[Sequence[int]], name: str = "") -> tuple[FiniteGroup, list[Perm]]:
    """Finite group whose elements are the given closed set of permutations.

    The identity permutation becomes index 0; others are sorted.
    """
    elems = sorted({tuple(m) for m in maps})
    ident = tuple(range(len(elems[0])))
    if ident not in elems:
        raise InputError("map set does not contain the identity")
    elems.remove(ident)
    elems.insert(0, ident)
    index = {e: i for i, e in enumerate(elems)}
    try:
        table = tuple(tuple(index[perm_mul(a, b)] for b in elems) for a in elems)
    except KeyError:
        raise InputError("map set is not closed under composition") from None
    inverse = tuple(index[perm_inv(a)] for a in elems)
    return FiniteGroup(table, inverse, None, None, name), elems


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
