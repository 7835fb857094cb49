"""Infinite group models for fusion systems.

A star of groups is a center vertex (containing ``S``) joined to leaf vertices
along edge groups.  Vertex and edge groups are standalone ``FiniteGroup``
values; edge injections are ``GroupHom`` objects between whole groups.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import Matrix, ZZ
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.matrices.normalforms import invariant_factors

from . import fusion as fu
from . import groups as gr
from .errors import BudgetExceeded, InputError, ModelError, PresentationError
from .groups import FiniteGroup, GroupHom, Subgroup

FLAVORS = ("centric-radical", "centric", "essential")
DEFAULT_PERM_BUDGET = 10_000


@dataclass
class Edge:
    group: FiniteGroup
    into_base: GroupHom
    into_vertex: GroupHom
    vertex: int
    base: int = 0

    @property
    def base_image(self) -> Subgroup:
        return self.into_base.image()

    @property
    def vertex_image(self) -> Subgroup:
        return self.into_vertex.image()


@dataclass
class StarOfGroups:
    vertices: list[FiniteGroup]
    edges: list[Edge]
    p: int
    sylow_map: GroupHom | None = None
    sylow_vertex: int = 0
    labels: list[str] = field(default_factory=list)
    base_points: list[Subgroup | None] = field(default_factory=list)
    conditions: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"L{i + 1}" for i in range(len(self.vertices))]
        self.validate()

    @property
    def S(self) -> Subgroup:
        return self.sylow_map.image()

    @property
    def S_group(self) -> FiniteGroup:
        return self.sylow_map.domain.parent

    def edge_image(self, v: int) -> Subgroup:
        """The subgroup of vertex ``v`` along which it is glued."""
        if v == self.sylow_vertex:
            return self.S
        return next(e.vertex_image for e in self.edges if e.vertex == v)

    def edge_of(self, v: int) -> Edge:
        return next(e for e in self.edges if e.vertex == v)

    def validate(self) -> None:
        c = self.sylow_vertex
        n = len(self.vertices)
        if not 0 <= c < n:
            raise ModelError("model malformed: sylow vertex out of range")
        leaves = sorted(e.vertex for e in self.edges)
        if leaves != [v for v in range(n) if v != c]:
            raise ModelError("model malformed: edges do not form a star on the vertices")
        if self.sylow_map is not None:
            f = self.sylow_map
            if f.codomain.parent is not self.vertices[c]:
                raise ModelError("model malformed: S is not recorded inside the base vertex")
            if not f.is_injective() or not f.is_homomorphism():
                raise ModelError("model malformed: S does not embed in the base vertex")
            if gr.p_part(self.vertices[c].order, self.p) != f.domain.order or \
                    not f.domain.parent.is_p_group(self.p):
                raise ModelError("model malformed: S is not a Sylow p-subgroup of the base vertex")
        for e in self.edges:
            if e.base != c:
                raise ModelError("model malformed: edge not attached to the center")
            for f, target in ((e.into_base, self.vertices[c]), (e.into_vertex, self.vertices[e.vertex])):
                if f.domain.parent is not e.group or f.domain.order != e.group.order:
                    raise ModelError("model malformed: edge map not defined on the edge group")
                if f.codomain.parent is not target:
                    raise ModelError("model malformed: edge map lands in the wrong vertex")
                if not f.is_injective() or not f.is_homomorphism():
                    raise ModelError("model malformed: edge map is not a monomorphism")
            if self.sylow_map is not None and not e.base_image <= self.S:
                raise ModelError("model malformed: edge image does not land inside S")

    def signature(self) -> tuple:
        """Hashable structural description used for equality tests."""
        return (tuple(v.table for v in self.vertices),
                tuple((e.group.table, e.into_base.images, e.into_vertex.images, e.vertex)
                      for e in self.edges),
                self.sylow_map.images if self.sylow_map else None, self.sylow_vertex)

    def describe(self) -> list[str]:
        out = [f"vertex {i + 1} ({self.labels[i]}): order {L.order}"
               for i, L in enumerate(self.vertices)]
        out += [f"edge {self.sylow_vertex + 1}-{e.vertex + 1}: order {e.group.order}"
                for e in self.edges]
        return out


def _whole_hom(src: FiniteGroup, dst: FiniteGroup, images) -> GroupHom:
    return GroupHom(src.whole, dst.whole, list(images))


# ---------------------------------------------------------------------------
# Robinson models

def model_family(F: fu.FusionSystem, flavor: str) -> list[Subgroup]:
    """Fully normalized class representatives, ``S`` first."""
    if flavor not in FLAVORS:
        raise InputError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
    if flavor == "centric-radical":
        keep = [P for P in fu.centric_subgroups(F) if fu.is_radical(F, P)]
    elif flavor == "centric":
        keep = fu.centric_subgroups(F)
    else:
        keep = fu.essential_subgroups(F)
    reps: list[Subgroup] = []
    seen: set[int] = set()
    for P in keep:
        if P.mask in seen or P == F.S:
            continue
        seen.update(Q.mask for Q in F.conjugates(P))
        reps.append(F.fully_normalized_conjugate(P))
    return [F.S, *reps]


def linking_automizer(G: Subgroup, P: Subgroup, p: int) -> tuple[FiniteGroup, list[int]]:
    """``N_G(P)/C'_G(P)`` with the projection from ``N_G(P)``."""
    N = gr.normalizer(G, P)
    C = gr.centralizer(G, P)
    return gr.quotient(N, gr.max_p_perfect(C, p))


def alperin_conditions(L: FiniteGroup, proj: list[int], P: Subgroup, NSP: Subgroup,
                       F: fu.FusionSystem) -> dict[str, bool]:
    p = F.p
    Pb = Subgroup(L, {proj[x] for x in P.elements})
    Zb = Subgroup(L, {proj[x] for x in gr.center(P).elements})
    quo, _ = gr.quotient(L, Pb)
    out = F.out_group(P)
    return {
        "O_p(L) = P": gr.o_p(L, p) == Pb,
        "C_L(P) = Z(P)": gr.centralizer(L.whole, Pb) == Zb,
        "L/P = Out_F(P)": bool(gr.isomorphisms(quo, out, first_only=True)),
        "N_S(P) Sylow in L": len({proj[x] for x in NSP.elements}) == gr.p_part(L.order, p),
    }


def robinson_model(G: FiniteGroup | Subgroup, p: int, flavor: str = "centric-radical",
                   F: fu.FusionSystem | None = None) -> StarOfGroups:
    Gs = G.whole if isinstance(G, FiniteGroup) else G
    F = F if F is not None else fu.fusion_of_group(Gs, p)
    S = F.S
    family = model_family(F, flavor)
    vertices, projs, conds = [], [], {}
    for i, P in enumerate(family):
        L, proj = linking_automizer(Gs, P, p)
        NSP = gr.normalizer(S, P)
        c = alperin_conditions(L, proj, P, NSP, F)
        if flavor == "centric" and not fu.is_radical(F, P):
            c.pop("O_p(L) = P")  # only radical subgroups satisfy this one
        bad = [k for k, ok in c.items() if not ok]
        if bad:
            raise ModelError(f"Alperin condition failed at vertex {i + 1}: {bad[0]}")
        conds[i] = c
        vertices.append(L)
        projs.append(proj)
    L1 = vertices[0]
    Sg = S.as_group()
    sylow_map = _whole_hom(Sg, L1, [projs[0][x] for x in S.elements])
    edges = []
    for i in range(1, len(family)):
        NSP = gr.normalizer(S, family[i])
        E = NSP.as_group()
        edges.append(Edge(E, _whole_hom(E, L1, [projs[0][x] for x in NSP.elements]),
                          _whole_hom(E, vertices[i], [projs[i][x] for x in NSP.elements]), i))
    labels = [f"N(P{i + 1})/C'(P{i + 1}), |P{i + 1}|={P.order}" for i, P in enumerate(family)]
    return StarOfGroups(vertices, edges, p, sylow_map, 0, labels, family, conds)


def single_vertex_model(L: FiniteGroup, p: int) -> StarOfGroups:
    S = gr.sylow_p(L, p)
    Sg = S.as_group()
    return StarOfGroups([L], [], p, _whole_hom(Sg, L, S.elements), 0, [L.name or "L1"])


def two_vertex_model(L1: FiniteGroup, L2: FiniteGroup, E: FiniteGroup, into1, into2, p: int,
                     S: Subgroup | None = None) -> StarOfGroups:
    """``L1 *_E L2`` with ``S`` (default: canonical Sylow) inside ``L1``."""
    S = S if S is not None else gr.sylow_p(L1, p)
    Sg = S.as_group()
    edge = Edge(E, _whole_hom(E, L1, into1), _whole_hom(E, L2, into2), 1)
    return StarOfGroups([L1, L2], [edge], p, _whole_hom(Sg, L1, S.elements), 0,
                        [L1.name or "L1", L2.name or "L2"])


# ---------------------------------------------------------------------------
# refinement

def refine_model(model: StarOfGroups, choices: dict[int, Sequence[Subgroup]]) -> StarOfGroups:
    """Replace vertex ``i`` by subgroups ``K_1..K_m`` that generate it.

    Every ``K_j`` must contain the glued subgroup of its vertex; one of the
    pieces of the center must contain ``S`` and becomes the new center.
    """
    c = model.sylow_vertex
    pieces: dict[int, list[Subgroup]] = {}
    for v, L in enumerate(model.vertices):
        Ks = list(choices.get(v, [L.whole]))
        if not Ks:
            raise ModelError(f"vertex {v + 1}: empty choice list")
        for K in Ks:
            if K.parent is not L:
                raise ModelError(f"vertex {v + 1}: chosen subgroup does not live in the vertex")
        gen = Ks[0]
        for K in Ks[1:]:
            gen = gr.join(gen, K)
        if gen.order != L.order:
            raise ModelError(f"vertex {v + 1}: chosen subgroups do not generate the vertex group")
        glue = model.edge_image(v)
        for j, K in enumerate(Ks):
            if not glue <= K:
                raise ModelError(f"vertex {v + 1}: edge group not contained in K{j + 1}")
        pieces[v] = Ks
    S = model.S
    center_pieces = pieces[c]
    k1 = next((j for j, K in enumerate(center_pieces)
               if S <= K and gr.p_part(K.order, model.p) == S.order), None)
    if k1 is None:
        raise ModelError("no chosen subgroup of the center has S as a Sylow p-subgroup")
    order = [(c, k1)] + [(c, j) for j in range(len(center_pieces)) if j != k1]
    order += [(v, j) for v in range(len(model.vertices)) if v != c for j in range(len(pieces[v]))]
    groups = [pieces[v][j].as_group() for v, j in order]
    K1 = pieces[c][k1]
    k1pos = K1.position
    Sg = model.S_group
    sylow_map = _whole_hom(Sg, groups[0], [k1pos[x] for x in model.sylow_map.images])
    edges = []
    for new, (v, j) in enumerate(order[1:], start=1):
        K = pieces[v][j]
        kpos = K.position
        if v == c:
            E, ib, iv = Sg, model.sylow_map.images, model.sylow_map.images
        else:
            e = model.edge_of(v)
            E, ib, iv = e.group, e.into_base.images, e.into_vertex.images
        edges.append(Edge(E, _whole_hom(E, groups[0], [k1pos[x] for x in ib]),
                          _whole_hom(E, groups[new], [kpos[x] for x in iv]), new))
    labels = [f"{model.labels[v]}/K{j + 1}" if len(pieces[v]) > 1 else model.labels[v]
              for v, j in order]
    return StarOfGroups(groups, edges, model.p, sylow_map, 0, labels)


# ---------------------------------------------------------------------------
# fusion of a model

def model_fusion(model: StarOfGroups, budget: int = fu.DEFAULT_MORPHISM_BUDGET) -> fu.FusionSystem:
    """Fusion over ``S`` generated by the vertex fusions along the gluing maps."""
    Sg = model.S_group
    c = model.sylow_vertex
    maps: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for v, L in enumerate(model.vertices):
        if v == c:
            to_s = dict(zip(model.sylow_map.images, Sg.whole.elements))
            T = model.S
        else:
            e = model.edge_of(v)
            back = dict(zip(e.into_vertex.images, e.into_base.images))
            sback = dict(zip(model.sylow_map.images, Sg.whole.elements))
            to_s = {x: sback[y] for x, y in back.items()}
            T = e.vertex_image
        for P in gr.subgroups(T, max(T.order, gr.DEFAULT_LATTICE_BOUND)):
            if P.order == 1:
                continue
            for g in range(L.order):
                img = [L.conj(g, x) for x in P.elements]
                if all(y in T for y in img):
                    dom = tuple(to_s[x] for x in P.elements)
                    cod = tuple(to_s[y] for y in img)
                    if dom != cod:
                        maps.add((dom, cod))
    gens = []
    for dom, cod in sorted(maps):
        order = sorted(range(len(dom)), key=dom.__getitem__)
        P = Subgroup(Sg, dom)
        gens.append(GroupHom(P, Sg.whole, [cod[k] for k in order]))
    F = fu.generate_fusion(fu.FusionGenerators(Sg.whole, model.p, gens), budget,
                           lattice_bound=Sg.order)
    F.provenance = "generated by vertex fusion"
    return F


@dataclass
class VerifyResult:
    equal: bool
    diff: tuple[Subgroup, Subgroup] | None
    generated: fu.FusionSystem
    target: fu.FusionSystem

    def __bool__(self) -> bool:
        return self.equal

    def describe(self) -> str:
        if self.equal:
            return "hom-sets agree on every pair of subgroups"
        P, Q = self.diff
        return (f"first difference at Hom(P, Q) with P = {list(P.elements)}, "
                f"Q = {list(Q.elements)} (element indices of S)")


def verify_model(model: StarOfGroups, F: fu.FusionSystem) -> VerifyResult:
    """Compare the fusion generated by the model with ``F`` elementwise."""
    gen = model_fusion(model)
    Sg = model.S_group
    own = F.S.as_group()
    if own.table == Sg.table:
        candidates = [GroupHom(F.S, Sg.whole, list(range(Sg.order)))]
    else:
        candidates = [GroupHom(F.S, Sg.whole, f.images)
                      for f in gr.isomorphisms(F.S, Sg.whole)]
    if not candidates:
        bogus = fu.inner_fusion(Sg, model.p)
        return VerifyResult(False, (Sg.whole, Sg.whole), gen, bogus)
    first = None
    for iso in candidates:
        target = fu.transport(F, iso)
        d = gen.diff(target)
        if d is None:
            return VerifyResult(True, None, gen, target)
        if first is None:
            first = VerifyResult(False, d, gen, target)
    return first


# ---------------------------------------------------------------------------
# Euler characteristic

@dataclass
class EulerReport:
    chi: Fraction
    d: int
    order_S: int
    lcm_index: int
    sign: int
    integral: bool


def euler_characteristic(model: StarOfGroups) -> EulerReport:
    """``Σ 1/|K_i| − Σ 1/|E_j|`` and ``d = χ·|S|·lcm[K_i : E_i]``."""
    chi = sum((Fraction(1, L.order) for L in model.vertices), Fraction(0))
    chi -= sum((Fraction(1, e.group.order) for e in model.edges), Fraction(0))
    s = model.S_group.order
    idx = [model.vertices[model.sylow_vertex].order // s]
    idx += [model.vertices[e.vertex].order // e.group.order for e in model.edges]
    m = gr.lcm(*idx)
    d = chi * s * m
    return EulerReport(chi, int(d), s, m, (d > 0) - (d < 0), d.denominator == 1)


# ---------------------------------------------------------------------------
# permutation representations

Perm = tuple[int, ...]


def default_complement(K: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """Lexicographically least p'-subgroup of maximal order."""
    K = K.whole if isinstance(K, FiniteGroup) else K
    cands = [H for H in gr.subgroups(K, max(K.order, gr.DEFAULT_LATTICE_BOUND))
             if H.order % p]
    top = max(H.order for H in cands)
    return min((H for H in cands if H.order == top), key=lambda H: H.elements)


def coset_action(K: FiniteGroup, H: Subgroup, copies: int) -> list[Perm]:
    """``K`` on ``copies`` disjoint copies of ``K/H``, indexed by element."""
    reps = gr.left_transversal(K.whole, H)
    k = len(reps)
    coset = [0] * K.order
    for i, r in enumerate(reps):
        for h in H.elements:
            coset[K.table[r][h]] = i
    out = []
    for x in range(K.order):
        base = [coset[K.table[x][r]] for r in reps]
        out.append(tuple(c * k + base[i] for c in range(copies) for i in range(k)))
    return out


def _orbits(perms: Sequence[Perm], t: int) -> list[list[int]]:
    seen = [False] * t
    out = []
    for a in range(t):
        if seen[a]:
            continue
        orb = sorted({q[a] for q in perms})
        for y in orb:
            seen[y] = True
        out.append(orb)
    return out


@dataclass
class PermutationRep:
    model: StarOfGroups
    complements: list[Subgroup]
    degree: int
    images: list[list[Perm]]
    relabel: list[Perm | None]

    def image(self, v: int, x: int) -> Perm:
        return self.images[v][x]


def free_kernel_perm_rep(model: StarOfGroups, H: Sequence[Subgroup] | None = None,
                         budget: int = DEFAULT_PERM_BUDGET) -> PermutationRep:
    p = model.p
    if H is None:
        H = [default_complement(L, p) for L in model.vertices]
    H = list(H)
    if len(H) != len(model.vertices):
        raise InputError("one subgroup per vertex is required")
    for v, (L, Hv) in enumerate(zip(model.vertices, H)):
        if Hv.parent is not L:
            raise InputError(f"subgroup for vertex {v + 1} does not live in that vertex")
        if Hv.order % p == 0:
            raise InputError(f"subgroup for vertex {v + 1} is not a p'-group")
    t = gr.lcm(*(L.order // Hv.order for L, Hv in zip(model.vertices, H)))
    if t > budget:
        raise BudgetExceeded(f"permutation degree {t} exceeds budget {budget}")
    raw = [coset_action(L, Hv, t // (L.order // Hv.order)) for L, Hv in zip(model.vertices, H)]
    c = model.sylow_vertex
    images: list[list[Perm]] = [None] * len(raw)  # type: ignore[list-item]
    images[c] = raw[c]
    relabel: list[Perm | None] = [None] * len(raw)
    for e in model.edges:
        v = e.vertex
        base = [raw[c][y] for y in e.into_base.images]
        side = [raw[v][y] for y in e.into_vertex.images]
        ob, ov = _orbits(base, t), _orbits(side, t)
        if any(len(o) != e.group.order for o in ob + ov):
            raise ModelError(f"edge {v + 1}: edge group does not act freely")
        beta = [0] * t
        for o_b, o_v in zip(ob, ov):
            ab, av = o_b[0], o_v[0]
            for qb, qv in zip(base, side):
                beta[qv[av]] = qb[ab]
        beta_inv = [0] * t
        for i, b in enumerate(beta):
            beta_inv[b] = i
        images[v] = [tuple(beta[q[beta_inv[i]]] for i in range(t)) for q in raw[v]]
        relabel[v] = tuple(beta)
    return PermutationRep(model, H, t, images, relabel)


@dataclass
class PermRepReport:
    degree: int
    edge_compatible: bool
    S_free: bool
    faithful_on_vertices: bool
    conjugates_nontrivial: bool
    kernel_index: int
    index_divisible_by_vertex_orders: bool

    @property
    def ok(self) -> bool:
        return self.edge_compatible and self.S_free and self.faithful_on_vertices \
            and self.conjugates_nontrivial


def check_perm_rep(rep: PermutationRep) -> PermRepReport:
    m = rep.model
    t = rep.degree
    ident = tuple(range(t))
    c = m.sylow_vertex
    edge_ok = all(rep.images[c][b] == rep.images[e.vertex][v]
                  for e in m.edges for b, v in zip(e.into_base.images, e.into_vertex.images))
    s_free = all(q[i] != i for x in m.sylow_map.images if x != 0
                 for q in [rep.images[c][x]] for i in range(t))
    faithful = all(rep.images[v][x] != ident for v, L in enumerate(m.vertices)
                   for x in range(1, L.order))
    letters = [q for imgs in rep.images for q in imgs]
    conj_ok = True
    for v, L in enumerate(m.vertices):
        for x in range(1, L.order):
            q = rep.images[v][x]
            for u in letters:
                # u q u^-1 fixes everything iff q does; computed anyway as a check
                uinv = gr.perm_inv(u)
                if gr.perm_mul(u, gr.perm_mul(q, uinv)) == ident:
                    conj_ok = False
                    break
            if not conj_ok:
                break
    gens = {rep.images[v][g] for v, L in enumerate(m.vertices) for g in L.whole.generators}
    gens.discard(ident)
    order = int(PermutationGroup([Permutation(list(g)) for g in sorted(gens)]).order()) \
        if gens else 1
    div = all(order % L.order == 0 for L in m.vertices)
    return PermRepReport(t, edge_ok, s_free, faithful, conj_ok, order, div)


@dataclass
class LinearModule:
    rep: PermutationRep
    p: int

    @property
    def dimension(self) -> int:
        return self.rep.degree

    def matrix(self, v: int, x: int) -> np.ndarray:
        """Permutation matrix over GF(p): basis vector ``e_i`` goes to ``e_{ρ(x)(i)}``."""
        q = self.rep.images[v][x]
        M = np.zeros((self.dimension, self.dimension), dtype=np.int64)
        M[list(q), list(range(self.dimension))] = 1
        return M


@dataclass
class ModuleReport:
    dimension: int
    vertex_summands: list[tuple[int, int]]
    vertex_ok: bool
    S_free_rank: int | None
    S_free: bool


def linearize(rep: PermutationRep, p: int) -> tuple[LinearModule, ModuleReport]:
    """Linearized permutation module with its restriction report.

    Each vertex restriction must be ``t/[K:H]`` copies of ``GF(p)[K/H]``:
    the orbits have size ``[K:H]`` and point stabilizers are conjugates of
    ``H``.  Freeness over ``S`` is checked on the permutation action.
    """
    m = rep.model
    t = rep.degree
    summands, ok = [], True
    for v, (L, H) in enumerate(zip(m.vertices, rep.complements)):
        imgs = rep.images[v]
        orbs = _orbits(imgs, t)
        k = L.order // H.order
        summands.append((len(orbs), k))
        if any(len(o) != k for o in orbs) or len(orbs) * k != t:
            ok = False
            continue
        conj = {gr.conjugate(H, g).elements for g in range(L.order)}
        for o in orbs:
            stab = tuple(x for x in range(L.order) if imgs[x][o[0]] == o[0])
            if stab not in conj:
                ok = False
    c = m.sylow_vertex
    s_imgs = [rep.images[c][x] for x in m.sylow_map.images]
    free = all(q[i] != i for q in s_imgs[1:] for i in range(t)) and \
        all(len(o) == len(s_imgs) for o in _orbits(s_imgs, t))
    rank = t // len(s_imgs) if free else None
    return LinearModule(rep, p), ModuleReport(t, summands, ok, rank, free)


# ---------------------------------------------------------------------------
# normal forms

@dataclass(frozen=True)
class ReducedWord:
    """``a_1 b_1 … a_k b_k · core`` for the star ``model``.

    Each pair ``(i, a, b)`` has ``a`` a least representative of a left coset
    of the edge image in the center and ``b`` a non-trivial least
    representative of a left coset of the edge image in leaf ``i``.
    """

    pairs: tuple[tuple[int, int, int], ...]
    core: int

    @property
    def syllables(self) -> int:
        return sum((a != 0) + 1 for _, a, _ in self.pairs)

    @property
    def length(self) -> int:
        return self.syllables + (self.core != 0)

    def is_identity(self) -> bool:
        return self.length == 0

    def letters(self, center: int) -> list[tuple[int, int]]:
        out = []
        for i, a, b in self.pairs:
            if a:
                out.append((center, a))
            out.append((i, b))
        if self.core:
            out.append((center, self.core))
        return out


class _Transversals:
    def __init__(self, model: StarOfGroups):
        self.model = model
        self.c = model.sylow_vertex
        self.center = model.vertices[self.c]
        self.edge: dict[int, Edge] = {e.vertex: e for e in model.edges}
        self.rep_a: dict[int, list[int]] = {}
        self.rep_b: dict[int, list[int]] = {}
        self.b_to_a: dict[int, dict[int, int]] = {}
        self.a_to_b: dict[int, dict[int, int]] = {}
        for v, e in self.edge.items():
            self.rep_a[v] = self._reps(self.center, e.base_image)
            self.rep_b[v] = self._reps(model.vertices[v], e.vertex_image)
            self.b_to_a[v] = dict(zip(e.into_vertex.images, e.into_base.images))
            self.a_to_b[v] = dict(zip(e.into_base.images, e.into_vertex.images))

    @staticmethod
    def _reps(L: FiniteGroup, A: Subgroup) -> list[int]:
        rep = [0] * L.order
        for r in gr.left_transversal(L.whole, A):
            for a in A.elements:
                rep[L.table[r][a]] = r
        return rep


def _center_mul(tv: _Transversals, x: int, w: ReducedWord) -> ReducedWord:
    T = tv.center.table
    inv = tv.center.inverse
    pairs = []
    for i, a, b in w.pairs:
        y = T[x][a]
        a2 = tv.rep_a[i][y]
        e = T[inv[a2]][y]
        L = tv.model.vertices[i]
        yb = L.table[tv.a_to_b[i][e]][b]
        b2 = tv.rep_b[i][yb]
        f = L.table[L.inverse[b2]][yb]
        pairs.append((i, a2, b2))
        x = tv.b_to_a[i][f]
    return ReducedWord(tuple(pairs), T[x][w.core])


def _left_mul(tv: _Transversals, v: int, x: int, w: ReducedWord) -> ReducedWord:
    if v == tv.c:
        return _center_mul(tv, x, w)
    if v not in tv.edge:
        raise InputError(f"letter references unknown vertex {v + 1}")
    L = tv.model.vertices[v]
    if tv.rep_b[v][x] == 0:
        return _center_mul(tv, tv.b_to_a[v][x], w)
    if w.pairs and w.pairs[0][0] == v and w.pairs[0][1] == 0:
        _, _, b = w.pairs[0]
        y = L.table[x][b]
        r = tv.rep_b[v][y]
        f = L.table[L.inverse[r]][y]
        rest = ReducedWord(w.pairs[1:], w.core)
        tail = _center_mul(tv, tv.b_to_a[v][f], rest)
        if r == 0:
            return tail
        return ReducedWord(((v, 0, r),) + tail.pairs, tail.core)
    r = tv.rep_b[v][x]
    f = L.table[L.inverse[r]][x]
    tail = _center_mul(tv, tv.b_to_a[v][f], w)
    return ReducedWord(((v, 0, r),) + tail.pairs, tail.core)


class NormalForms:
    """Normal-form arithmetic in the amalgam of a star of groups."""

    def __init__(self, model: StarOfGroups):
        self.model = model
        self._tv = _Transversals(model)

    @property
    def identity(self) -> ReducedWord:
        return ReducedWord((), 0)

    def _check(self, v: int, x: int) -> None:
        if not 0 <= v < len(self.model.vertices):
            raise InputError(f"malformed letter: vertex {v + 1} does not exist")
        if not 0 <= x < self.model.vertices[v].order:
            raise InputError(f"malformed letter: element {x} not in vertex {v + 1}")

    def normal_form(self, word: Sequence[tuple[int, int]]) -> ReducedWord:
        w = self.identity
        for v, x in reversed(list(word)):
            self._check(v, x)
            w = _left_mul(self._tv, v, x, w)
        return w

    def multiply(self, u: ReducedWord, w: ReducedWord) -> ReducedWord:
        for v, x in reversed(u.letters(self._tv.c)):
            w = _left_mul(self._tv, v, x, w)
        return w

    def inverse(self, u: ReducedWord) -> ReducedWord:
        letters = [(v, self.model.vertices[v].inverse[x]) for v, x in reversed(u.letters(self._tv.c))]
        return self.normal_form(letters)


def normal_form(model: StarOfGroups, word: Sequence[tuple[int, int]]) -> ReducedWord:
    return NormalForms(model).normal_form(word)


def multiply(model: StarOfGroups, u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return NormalForms(model).multiply(u, v)


# ---------------------------------------------------------------------------
# presentations

Word = tuple[int, ...]  # letters are 1-based generator numbers, negative for inverses


def word_inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def cayley_words(G: FiniteGroup, gens: Sequence[int], offset: int = 0) -> tuple[dict[int, Word], list[Word]]:
    """Spanning-tree words for every element and the resulting relators."""
    words: dict[int, Word] = {0: ()}
    tree: set[tuple[int, int]] = set()
    order = [0]
    i = 0
    while i < len(order):
        x = order[i]
        for k, s in enumerate(gens):
            y = G.table[x][s]
            if y not in words:
                words[y] = words[x] + (offset + k + 1,)
                tree.add((x, k))
                order.append(y)
        i += 1
    rels = []
    for x in order:
        for k, s in enumerate(gens):
            if (x, k) in tree:
                continue
            y = G.table[x][s]
            rels.append(words[x] + (offset + k + 1,) + word_inverse(words[y]))
    return words, rels


def free_reduce(w: Word) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass
class HnnModel:
    S: Subgroup
    p: int
    letters: list[tuple[Subgroup, GroupHom, int | None]]
    generators: list[str]
    relators: list[Word]
    style: str
    element_words: dict[int, Word] = field(default_factory=dict)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in w)

    def format(self) -> str:
        rels = ", ".join(self.format_word(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def evaluate(self, assignment: Sequence[Perm], w: Word) -> Perm:
        t = len(assignment[0])
        out = tuple(range(t))
        for x in w:
            g = assignment[abs(x) - 1]
            out = gr.perm_mul(out, g if x > 0 else gr.perm_inv(g))
        return out


def _automorphism_order(f: GroupHom) -> int:
    k, cur = 1, dict(zip(f.domain.elements, f.images))
    step = dict(cur)
    while any(cur[x] != x for x in cur):
        cur = {x: step[y] for x, y in cur.items()}
        k += 1
    return k


def _presentation(gens: fu.FusionGenerators, style: str) -> HnnModel:
    S = gens.S
    par = S.parent
    sg = list(S.generators)
    words, rels = cayley_words(par, sg) if sg else ({0: ()}, [])
    # cayley_words walks from the identity of the parent restricted to S
    names = [f"s{k + 1}" for k in range(len(sg))]
    letters = []
    relators = [free_reduce(r) for r in rels]
    relators = [r for r in relators if r]
    for j, f in enumerate(gens.maps):
        tnum = len(sg) + j + 1
        names.append(f"t{j + 1}")
        order = None
        if style == "finite-order":
            order = _automorphism_order(f)
        letters.append((f.domain, f, order))
        for u in f.domain.generators:
            wu, wf = words[u], words[f(u)]
            if style == "leary-stancu":
                rel = (-tnum,) + wu + (tnum,) + word_inverse(wf)
            else:
                rel = (tnum,) + wu + (-tnum,) + word_inverse(wf)
            relators.append(free_reduce(rel))
        if order is not None:
            relators.append((tnum,) * order)
    return HnnModel(S, gens.p, letters, names, relators, style, words)


def leary_stancu_presentation(gens: fu.FusionGenerators) -> HnnModel:
    """``S * F(t_i)`` modulo ``t_i⁻¹ u t_i = φ_i(u)``."""
    return _presentation(gens, "leary-stancu")


def finite_order_presentation(gens: fu.FusionGenerators) -> HnnModel:
    """``S * F(t_i)`` modulo ``t_i u t_i⁻¹ = φ_i(u)`` and ``t_i^{ord φ_i}``."""
    for j, f in enumerate(gens.maps):
        if f.image() != f.domain:
            raise PresentationError(f"map {j + 1} is not an automorphism of its domain")
        k = _automorphism_order(f)
        if k % gens.p == 0:
            raise PresentationError(f"map {j + 1} has order {k}, not coprime to p = {gens.p}")
    redundant = fu.redundant_generators(gens)
    if redundant:
        raise PresentationError(
            f"minimality violated: map {redundant[0] + 1} lies in the closure of the others")
    return _presentation(gens, "finite-order")


def star_presentation(model: StarOfGroups) -> tuple[list[str], list[Word]]:
    """Vertex Cayley-graph relators plus one identification per edge generator."""
    names: list[str] = []
    relators: list[Word] = []
    words: list[dict[int, Word]] = []
    for v, L in enumerate(model.vertices):
        gens = list(L.whole.generators)
        w, rels = cayley_words(L, gens, len(names))
        names += [f"v{v + 1}g{k + 1}" for k in range(len(gens))]
        relators += [free_reduce(r) for r in rels]
        words.append(w)
    for e in model.edges:
        for g in e.group.whole.generators:
            a = words[e.base][e.into_base(g)]
            b = words[e.vertex][e.into_vertex(g)]
            relators.append(free_reduce(a + word_inverse(b)))
    return names, [r for r in relators if r]


@dataclass
class Abelianization:
    invariant_factors: list[int]
    free_rank: int
    h1_dimension: int

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def abelianization_from(n_gens: int, relators: Sequence[Word], p: int) -> Abelianization:
    if n_gens == 0:
        return Abelianization([], 0, 0)
    rows = []
    for r in relators:
        row = [0] * n_gens
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        if any(row):
            rows.append(row)
    if not rows:
        return Abelianization([], n_gens, n_gens)
    inv = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [d for d in inv if d != 0]
    free = n_gens - len(nonzero)
    torsion = [d for d in nonzero if d != 1]
    return Abelianization(torsion, free, free + sum(1 for d in torsion if d % p == 0))


def abelianization(model: StarOfGroups | HnnModel, p: int) -> Abelianization:
    if isinstance(model, HnnModel):
        return abelianization_from(len(model.generators), model.relators, p)
    names, rels = star_presentation(model)
    return abelianization_from(len(names), rels, p)


def permutation_quotient(model: HnnModel, assignment: Sequence[Perm]) -> tuple[bool, int]:
    """Whether ``assignment`` satisfies every relator, and the order of its image."""
    if len(assignment) != len(model.generators):
        raise InputError("one permutation per generator is required")
    t = len(assignment[0])
    ident = tuple(range(t))
    holds = all(model.evaluate(assignment, r) == ident for r in model.relators)
    gens = [Permutation(list(g)) for g in assignment if tuple(g) != ident]
    order = int(PermutationGroup(gens).order()) if gens else 1
    return holds, order
