"""Fusion systems over finite p-groups.

A fusion system is stored by its isomorphisms: for every subgroup ``P`` of
``S`` the set of injective maps out of ``P`` that belong to the system, each
as a tuple of images aligned with ``P.elements``.  A morphism ``P → Q`` is an
isomorphism whose image lies in ``Q`` followed by the inclusion, so the full
hom-sets are recovered by filtering.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import groups as gr
from .errors import BudgetExceeded, InputError, NotFullyNormalized
from .groups import FiniteGroup, GroupHom, Subgroup

DEFAULT_MORPHISM_BUDGET = 2_000_000

Map = tuple[int, ...]


def _mask(xs: Iterable[int]) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


def _inverse_map(P: Subgroup, phi: Map) -> Map:
    back = dict(zip(phi, P.elements))
    return tuple(back[y] for y in sorted(back))


class FusionSystem:
    """Fusion system over ``S``; see the module docstring for the storage."""

    def __init__(self, S: Subgroup, p: int, subs: Sequence[Subgroup],
                 isos: Sequence[Iterable[Map]], provenance: str):
        self.S = S
        self.p = p
        self.subgroups = list(subs)
        self._index = {P.mask: i for i, P in enumerate(self.subgroups)}
        self._isos = [tuple(sorted(set(m))) for m in isos]
        self.provenance = provenance
        self._cache: dict = {}

    # -- lookup ---------------------------------------------------------------

    @property
    def parent(self) -> FiniteGroup:
        return self.S.parent

    def index(self, P: Subgroup) -> int:
        try:
            return self._index[P.mask]
        except KeyError:
            raise InputError("not a subgroup of S") from None

    def subgroup_of(self, elements: Iterable[int]) -> Subgroup:
        return self.subgroups[self._index[_mask(elements)]]

    def isos(self, P: Subgroup) -> tuple[Map, ...]:
        """Every map out of ``P`` in the system, as image tuples."""
        return self._isos[self.index(P)]

    def hom(self, P: Subgroup, Q: Subgroup) -> list[GroupHom]:
        Qs = Q.element_set
        return [GroupHom(P, Q, phi) for phi in self.isos(P) if Qs.issuperset(phi)]

    def aut(self, P: Subgroup) -> list[GroupHom]:
        return self.hom(P, P)

    def aut_maps(self, P: Subgroup) -> list[Map]:
        m = P.mask
        return [phi for phi in self.isos(P) if _mask(phi) == m]

    def morphisms(self):
        """Yield ``(P, phi)`` for every stored isomorphism."""
        for P, maps in zip(self.subgroups, self._isos):
            for phi in maps:
                yield P, phi

    @property
    def n_isos(self) -> int:
        return sum(len(m) for m in self._isos)

    def count_matrix(self) -> np.ndarray:
        """Entry ``[i, j]`` is ``|Hom_F(P_i, P_j)|`` in subgroup-list order."""
        n = len(self.subgroups)
        out = np.zeros((n, n), dtype=np.int64)
        masks = [Q.mask for Q in self.subgroups]
        for i, maps in enumerate(self._isos):
            for phi in maps:
                m = _mask(phi)
                for j, qm in enumerate(masks):
                    if m & qm == m:
                        out[i, j] += 1
        return out

    def conjugates(self, P: Subgroup) -> list[Subgroup]:
        """The F-conjugacy class of ``P`` in subgroup-list order."""
        idx = sorted({self._index[_mask(phi)] for phi in self.isos(P)})
        return [self.subgroups[i] for i in idx]

    def classes(self) -> list[list[Subgroup]]:
        seen: set[int] = set()
        out = []
        for P in self.subgroups:
            if P.mask in seen:
                continue
            cls = self.conjugates(P)
            seen.update(Q.mask for Q in cls)
            out.append(cls)
        return out

    # -- comparison -----------------------------------------------------------

    def same_frame(self, other: FusionSystem) -> bool:
        return self.S == other.S and self.p == other.p

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionSystem):
            return NotImplemented
        return self.same_frame(other) and self._isos == other._isos

    def __hash__(self) -> int:
        return hash((self.S.elements, len(self._isos)))

    def diff(self, other: FusionSystem) -> tuple[Subgroup, Subgroup] | None:
        """First pair ``(P, Q)`` whose hom-sets differ, or None if equal."""
        if not self.same_frame(other):
            return (self.S, other.S)
        for P, a, b in zip(self.subgroups, self._isos, other._isos):
            if a != b:
                for Q in self.subgroups:
                    ha = {phi for phi in a if Q.element_set.issuperset(phi)}
                    hb = {phi for phi in b if Q.element_set.issuperset(phi)}
                    if ha != hb:
                        return (P, Q)
        return None

    def __repr__(self) -> str:
        return (f"<FusionSystem p={self.p} |S|={self.S.order} "
                f"isos={self.n_isos} ({self.provenance})>")

    # -- local data -----------------------------------------------------------

    def _orders(self, kind: str) -> list[int]:
        key = "orders_" + kind
        if key not in self._cache:
            op = gr.normalizer if kind == "N" else gr.centralizer
            self._cache[key] = [op(self.S, P).order for P in self.subgroups]
        return self._cache[key]

    def is_fully_normalized(self, P: Subgroup) -> bool:
        n = self._orders("N")
        return n[self.index(P)] == max(n[self.index(Q)] for Q in self.conjugates(P))

    def is_fully_centralized(self, P: Subgroup) -> bool:
        c = self._orders("C")
        return c[self.index(P)] == max(c[self.index(Q)] for Q in self.conjugates(P))

    def fully_normalized_conjugate(self, P: Subgroup) -> Subgroup:
        """Least member of the class of ``P`` with maximal ``|N_S|``."""
        n = self._orders("N")
        cls = self.conjugates(P)
        top = max(n[self.index(Q)] for Q in cls)
        return next(Q for Q in cls if n[self.index(Q)] == top)

    def aut_group(self, P: Subgroup) -> tuple[FiniteGroup, list[Map]]:
        """``Aut_F(P)`` as a group of permutations of ``P``'s positions."""
        pos = P.position
        perms = [tuple(pos[y] for y in phi) for phi in self.aut_maps(P)]
        return gr.group_from_maps(perms)

    def out_group(self, P: Subgroup) -> FiniteGroup:
        """``Out_F(P) = Aut_F(P)/Inn(P)``."""
        A, perms = self.aut_group(P)
        pos = P.position
        par = P.parent
        index = {q: i for i, q in enumerate(perms)}
        inn = {index[tuple(pos[par.conj(x, y)] for y in P.elements)] for x in P.elements}
        Q, _ = gr.quotient(A, Subgroup(A, inn))
        return Q


# ---------------------------------------------------------------------------
# construction

def _lattice(S: Subgroup, bound: int) -> list[Subgroup]:
    return gr.subgroups(S, max(bound, gr.DEFAULT_LATTICE_BOUND))


def _conj_map(par: FiniteGroup, g: int, P: Subgroup) -> Map:
    return tuple(par.conj(g, x) for x in P.elements)


def fusion_of_group(G: FiniteGroup | Subgroup, p: int,
                    lattice_bound: int = gr.DEFAULT_LATTICE_BOUND) -> FusionSystem:
    """``F_S(G)`` for the canonical Sylow p-subgroup ``S`` of ``G``."""
    Gs = G.whole if isinstance(G, FiniteGroup) else G
    par = Gs.parent
    S = gr.sylow_p(Gs, p)
    subs = _lattice(S, lattice_bound)
    smask = S.mask
    isos = []
    for P in subs:
        maps = set()
        for g in Gs.elements:
            phi = _conj_map(par, g, P)
            if _mask(phi) & smask == _mask(phi):
                maps.add(phi)
        isos.append(maps)
    name = par.name or f"order {par.order}"
    return FusionSystem(S, p, subs, isos, f"of-group {name}")


def inner_fusion(S: FiniteGroup | Subgroup, p: int) -> FusionSystem:
    """``F_S(S)``: only conjugations by elements of ``S``."""
    S = S.whole if isinstance(S, FiniteGroup) else S
    subs = _lattice(S, S.order)
    par = S.parent
    isos = [{_conj_map(par, g, P) for g in S.elements} for P in subs]
    return FusionSystem(S, p, subs, isos, "inner")


@dataclass
class FusionGenerators:
    """Injective maps ``P_i → Q_i`` between subgroups of ``S``."""

    S: Subgroup
    p: int
    maps: list[GroupHom] = field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.S, FiniteGroup):
            self.S = self.S.whole
        if not gr.is_p_subgroup(self.S, self.p):
            raise InputError(f"S has order {self.S.order}, not a power of {self.p}")
        for f in self.maps:
            if f.domain.parent is not self.S.parent or not f.domain <= self.S:
                raise InputError("map domain is not a subgroup of S")
            if not set(f.images) <= self.S.element_set:
                raise InputError("map image is not inside S")
            if not f.is_injective() or not f.is_homomorphism():
                raise InputError("generator is not an injective homomorphism")


class _Closure:
    """Worklist closure under inverses, restriction and composition."""

    def __init__(self, S: Subgroup, p: int, subs: list[Subgroup], budget: int, order: str):
        self.S = S
        self.subs = subs
        self.index = {P.mask: i for i, P in enumerate(subs)}
        self.budget = budget
        self.restrict_first = order == "restrict-first"
        self.lists: list[list[Map]] = [[] for _ in subs]
        self.sets: list[set[Map]] = [set() for _ in subs]
        self.queue: deque[tuple[int, Map]] = deque()
        self.count = 0
        # in a p-group the maximal subgroups are those of index p
        self.maximal = [[j for j, R in enumerate(subs[:i]) if R.order * p == P.order and R <= P]
                        for i, P in enumerate(subs)]

    def add(self, i: int, phi: Map) -> None:
        if phi in self.sets[i]:
            return
        self.count += 1
        if self.count > self.budget:
            raise BudgetExceeded(f"closure too large: more than {self.budget} morphisms")
        self.sets[i].add(phi)
        self.lists[i].append(phi)
        self.queue.append((i, phi))

    def _restrictions(self, i: int, phi: Map) -> None:
        pos = self.subs[i].position
        for j in self.maximal[i]:
            self.add(j, tuple(phi[pos[x]] for x in self.subs[j].elements))

    def _compositions(self, i: int, phi: Map, j: int) -> None:
        P, Q = self.subs[i], self.subs[j]
        qpos = Q.position
        for psi in list(self.lists[j]):
            self.add(i, tuple(psi[qpos[y]] for y in phi))
        for theta in list(self.lists[i]):
            k = self.index[_mask(theta)]
            self.add(k, tuple(v for _, v in sorted(zip(theta, phi))))

    def run(self) -> None:
        while self.queue:
            i, phi = self.queue.popleft()
            j = self.index[_mask(phi)]
            self.add(j, _inverse_map(self.subs[i], phi))
            if self.restrict_first:
                self._restrictions(i, phi)
                self._compositions(i, phi, j)
            else:
                self._compositions(i, phi, j)
                self._restrictions(i, phi)


def _close(S: Subgroup, p: int, subs: list[Subgroup], seeds: Iterable[tuple[int, Map]],
           budget: int, order: str, provenance: str) -> FusionSystem:
    cl = _Closure(S, p, subs, budget, order)
    par = S.parent
    for i, P in enumerate(subs):
        for g in S.elements:
            cl.add(i, _conj_map(par, g, P))
    for i, phi in seeds:
        cl.add(i, phi)
    cl.run()
    return FusionSystem(S, p, subs, cl.sets, provenance)


def generate_fusion(gens: FusionGenerators, budget: int = DEFAULT_MORPHISM_BUDGET,
                    order: str = "restrict-first",
                    lattice_bound: int = gr.DEFAULT_LATTICE_BOUND) -> FusionSystem:
    """The smallest fusion system over ``gens.S`` containing every generator."""
    if order not in ("restrict-first", "compose-first"):
        raise InputError(f"unknown closure order {order!r}")
    S = gens.S
    subs = _lattice(S, lattice_bound)
    index = {P.mask: i for i, P in enumerate(subs)}
    seeds = [(index[f.domain.mask], f.images) for f in gens.maps]
    tag = f"generated-by {len(gens.maps)} maps" if gens.maps else "generated-by nothing"
    return _close(S, gens.p, subs, seeds, budget, order, tag)


def generators_of(F: FusionSystem) -> FusionGenerators:
    """Every stored isomorphism as a generator (for idempotence checks)."""
    maps = [GroupHom(P, F.S, phi) for P, phi in F.morphisms()]
    return FusionGenerators(F.S, F.p, maps)


def redundant_generators(gens: FusionGenerators,
                         budget: int = DEFAULT_MORPHISM_BUDGET) -> list[int]:
    """Indices ``i`` such that map ``i`` lies in the closure of the others."""
    out = []
    for i, f in enumerate(gens.maps):
        rest = FusionGenerators(gens.S, gens.p, gens.maps[:i] + gens.maps[i + 1:])
        F = generate_fusion(rest, budget)
        if f.images in F.isos(f.domain):
            out.append(i)
    return out


def transport(F: FusionSystem, f: GroupHom) -> FusionSystem:
    """Carry ``F`` along an isomorphism ``f`` from ``F.S`` onto ``f.image()``."""
    if f.domain != F.S or not f.is_injective():
        raise InputError("transport needs an injective map defined on S")
    T = f.image()
    fwd = dict(zip(f.domain.elements, f.images))
    subs = _lattice(T, T.order)
    index = {P.mask: i for i, P in enumerate(subs)}
    isos: list[set[Map]] = [set() for _ in subs]
    for P, phi in F.morphisms():
        pairs = sorted((fwd[x], fwd[y]) for x, y in zip(P.elements, phi))
        isos[index[_mask(a for a, _ in pairs)]].add(tuple(b for _, b in pairs))
    return FusionSystem(T, F.p, subs, isos, F.provenance)


# ---------------------------------------------------------------------------
# axioms and predicates

def check_axioms(F: FusionSystem) -> list[str]:
    """Exhaustive check of the defining properties; returns the violations."""
    bad: list[str] = []
    par = F.parent
    subs = F.subgroups
    for i, P in enumerate(subs):
        maps = set(F._isos[i])
        pos = P.position
        for g in F.S.elements:
            if _conj_map(par, g, P) not in maps:
                bad.append(f"conjugation by {g} on subgroup {i} missing")
                break
        for phi in maps:
            if len(set(phi)) != len(phi) or not set(phi) <= F.S.element_set:
                bad.append(f"map on subgroup {i} is not injective into S")
                continue
            if any(phi[pos[par.product(a, b)]] != par.product(phi[pos[a]], phi[pos[b]])
                   for a in P.generators for b in P.elements):
                bad.append(f"map on subgroup {i} is not a homomorphism")
                continue
            j = F._index.get(_mask(phi))
            if j is None:
                bad.append(f"image of a map on subgroup {i} is not a subgroup")
                continue
            if _inverse_map(P, phi) not in set(F._isos[j]):
                bad.append(f"inverse of a map on subgroup {i} missing")
            Q = subs[j]
            qpos = Q.position
            targets = set(F._isos[j])
            for psi in targets:
                if tuple(psi[qpos[y]] for y in phi) not in maps:
                    bad.append(f"composite through subgroup {j} missing")
                    break
            for k, R in enumerate(subs[:i]):
                if R <= P and tuple(phi[pos[x]] for x in R.elements) not in set(F._isos[k]):
                    bad.append(f"restriction of a map on subgroup {i} to {k} missing")
                    break
        if len(bad) > 20:
            break
    return bad


@dataclass
class SaturationReport:
    saturated: bool
    axiom: str | None = None
    subgroup: Subgroup | None = None
    witness: Map | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.saturated


def _aut_s(S: Subgroup, Q: Subgroup) -> set[Map]:
    par = S.parent
    return {_conj_map(par, h, Q) for h in gr.normalizer(S, Q).elements}


def is_saturated(F: FusionSystem) -> SaturationReport:
    """Sylow and extension axioms, checked over every subgroup and map."""
    S, p = F.S, F.p
    par = F.parent
    for P in F.subgroups:
        if not F.is_fully_normalized(P):
            continue
        if not F.is_fully_centralized(P):
            return SaturationReport(False, "fully normalized implies fully centralized", P,
                                    detail="fully normalized subgroup is not fully centralized")
        aut_f = len(F.aut_maps(P))
        aut_s = len(_aut_s(S, P))
        if (aut_f // aut_s) % p == 0:
            return SaturationReport(False, "Sylow", P,
                                    detail=f"|Aut_F(P)| = {aut_f}, |Aut_S(P)| = {aut_s}")
    restricted: dict[tuple[int, int], set[Map]] = {}
    for P in F.subgroups:
        NP = gr.normalizer(S, P)
        pos = P.position
        for phi in F.isos(P):
            Q = F.subgroup_of(phi)
            if not F.is_fully_centralized(Q):
                continue
            autq = _aut_s(S, Q)
            inv = dict(zip(phi, P.elements))
            n_phi = []
            for g in NP.elements:
                m = tuple(phi[pos[par.conj(g, inv[y])]] for y in Q.elements)
                if m in autq:
                    n_phi.append(g)
            N = F.subgroup_of(n_phi)
            key = (F.index(N), F.index(P))
            if key not in restricted:
                npos = N.position
                restricted[key] = {tuple(psi[npos[x]] for x in P.elements)
                                   for psi in F.isos(N)}
            if phi not in restricted[key]:
                return SaturationReport(False, "extension", P, phi,
                                        detail=f"map does not extend to N_phi of order {N.order}")
    return SaturationReport(True)


def is_centric(F: FusionSystem, P: Subgroup) -> bool:
    return all(gr.centralizer(F.S, Q) <= Q for Q in F.conjugates(P))


def centric_subgroups(F: FusionSystem) -> list[Subgroup]:
    return [P for P in F.subgroups if is_centric(F, P)]


def is_radical(F: FusionSystem, P: Subgroup) -> bool:
    return gr.o_p(F.out_group(P), F.p).order == 1


def radical_subgroups(F: FusionSystem) -> list[Subgroup]:
    return [P for P in F.subgroups if is_radical(F, P)]


def has_strongly_p_embedded(G: FiniteGroup, p: int) -> bool:
    """Brute force: proper ``H`` with ``p | |H|`` and ``p ∤ |H ∩ H^g|`` for ``g ∉ H``."""
    if G.order % p:
        return False
    for H in gr.subgroups(G, max(G.order, gr.DEFAULT_LATTICE_BOUND)):
        if H.order == G.order or H.order % p:
            continue
        if all(gr.intersection(H, gr.conjugate(H, g)).order % p
               for g in range(G.order) if g not in H):
            return True
    return False


def is_essential(F: FusionSystem, P: Subgroup) -> bool:
    if P == F.S or not is_centric(F, P):
        return False
    return has_strongly_p_embedded(F.out_group(P), F.p)


def essential_subgroups(F: FusionSystem) -> list[Subgroup]:
    return [P for P in F.subgroups if is_essential(F, P)]


def is_strongly_closed(F: FusionSystem, T: Subgroup) -> bool:
    if not T <= F.S:
        raise InputError("T is not a subgroup of S")
    tm = T.mask
    for P, phi in F.morphisms():
        if P <= T and _mask(phi) & tm != _mask(phi):
            return False
    return True


def fusion_center(F: FusionSystem) -> Subgroup:
    """``Z(F)``: central elements of ``S`` fixed by every map defined on them."""
    Z = gr.center(F.S)
    keep = set(Z.elements)
    for P, phi in F.morphisms():
        for x, y in zip(P.elements, phi):
            if x != y:
                keep.discard(x)
    return Subgroup(F.parent, keep)


def _subsystem(F: FusionSystem, base: Subgroup, Q: Subgroup, keep, tag: str) -> FusionSystem:
    subs = _lattice(base, base.order)
    index = {P.mask: i for i, P in enumerate(subs)}
    isos: list[set[Map]] = [set() for _ in subs]
    bm = base.mask
    for R, psi in F.morphisms():
        if not Q <= R or not keep(R, psi):
            continue
        pos = R.position
        for P in subs:
            if P <= R:
                isos[index[P.mask]].add(tuple(psi[pos[x]] for x in P.elements))
    for i, P in enumerate(subs):
        isos[i] = {phi for phi in isos[i] if _mask(phi) & bm == _mask(phi)}
    seeds = [(i, phi) for i, maps in enumerate(isos) for phi in maps]
    return _close(base, F.p, subs, seeds, DEFAULT_MORPHISM_BUDGET, "restrict-first", tag)


def normalizer_subsystem(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    """``N_F(Q)`` over ``N_S(Q)``: maps extending to ``PQ`` and preserving ``Q``."""
    if not F.is_fully_normalized(Q):
        raise NotFullyNormalized("not fully normalized: replace Q by a fully normalized conjugate")
    N = gr.normalizer(F.S, Q)
    qm = Q.mask

    def keep(R, psi):
        pos = R.position
        return R <= N and _mask(psi[pos[x]] for x in Q.elements) == qm

    return _subsystem(F, N, Q, keep, "normalizer subsystem")


def centralizer_subsystem(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    """``C_F(Q)`` over ``C_S(Q)``: maps extending to ``PQ`` and fixing ``Q`` pointwise."""
    if not F.is_fully_centralized(Q):
        raise NotFullyNormalized("not fully centralized: replace Q by a fully centralized conjugate")
    C = gr.centralizer(F.S, Q)
    CQ = gr.join(C, Q)

    def keep(R, psi):
        pos = R.position
        return R <= CQ and all(psi[pos[x]] == x for x in Q.elements)

    return _subsystem(F, C, Q, keep, "centralizer subsystem")


def product_fusion(F1: FusionSystem, F2: FusionSystem,
                   budget: int = DEFAULT_MORPHISM_BUDGET) -> FusionSystem:
    """Fusion system on ``S1 × S2`` generated by ``φ1 × id`` and ``id × φ2``.

    The product group numbers ``(a, b)`` as ``a*|S2| + b`` with ``a``, ``b``
    positions in ``F1.S.elements`` and ``F2.S.elements``.
    """
    if F1.p != F2.p:
        raise InputError("product of fusion systems at different primes")
    A, B = F1.S.as_group(), F2.S.as_group()
    D = gr.direct_product(A, B)
    m = B.order
    apos, bpos = F1.S.position, F2.S.position
    maps = []
    for P, phi in F1.morphisms():
        dom = [apos[x] * m + b for x in P.elements for b in range(m)]
        img = [apos[y] * m + b for y in phi for b in range(m)]
        order = sorted(range(len(dom)), key=dom.__getitem__)
        maps.append(GroupHom(Subgroup(D, dom), D.whole, [img[k] for k in order]))
    for P, phi in F2.morphisms():
        dom = [a * m + bpos[x] for a in range(A.order) for x in P.elements]
        img = [a * m + bpos[y] for a in range(A.order) for y in phi]
        order = sorted(range(len(dom)), key=dom.__getitem__)
        maps.append(GroupHom(Subgroup(D, dom), D.whole, [img[k] for k in order]))
    maps = [f for f in maps if f.images != f.domain.elements]
    gens = FusionGenerators(D.whole, F1.p, maps)
    F = generate_fusion(gens, budget, lattice_bound=D.order)
    F.provenance = "product"
    return F


def product_subgroup_of(F: FusionSystem, F1: FusionSystem, F2: FusionSystem,
                        P1: Subgroup, P2: Subgroup) -> Subgroup:
    """``P1 × P2`` inside the product system ``F`` built by ``product_fusion``."""
    m = F2.S.order
    apos, bpos = F1.S.position, F2.S.position
    return F.subgroup_of(apos[x] * m + bpos[y] for x in P1.elements for y in P2.elements)
