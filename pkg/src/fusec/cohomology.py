"""Mod-p cohomology of finite groups through normalized bar cochains.

An n-cochain is a function on n-tuples of non-identity elements, stored as a
vector indexed by the tuple read as a base ``|G|-1`` number (first argument
most significant).  Cohomology classes get coordinates from a complement of
the coboundaries inside the cocycles, kept in reduced echelon form so that
classifying a cocycle is one reduction and one column read.

Matrices of induced maps act on column vectors of coordinates: for
``f: H → G`` the matrix has shape ``(dim H^n(H), dim H^n(G))`` and
``induced(g∘f) = induced(f) @ induced(g)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import gfp
from .errors import BudgetExceeded, InputError
from .groups import FiniteGroup, GroupHom, Subgroup

DEFAULT_COCHAIN_BUDGET = 100_000
DEFAULT_MAX_DEGREE = 3


def _tuples(m: int, n: int) -> np.ndarray:
    """All n-tuples of non-identity elements, shape ``(n, m**n)``."""
    if n == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.indices((m,) * n, dtype=np.int64).reshape(n, -1) + 1


def _column(args: list[np.ndarray], m: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    ok = np.ones(size, dtype=bool)
    col = np.zeros(size, dtype=np.int64)
    for a in args:
        ok &= a != 0
        col = col * m + (a - 1)
    return ok, col


def coboundary_matrix(G: FiniteGroup, n: int, p: int) -> sp.csr_matrix:
    """``d: C^n → C^{n+1}`` as a sparse ``(m^(n+1), m^n)`` matrix, ``m = |G|-1``."""
    m = G.order - 1
    T = G.np_table
    grid = _tuples(m, n + 1)
    R = grid.shape[1]
    if R == 0 or m ** n == 0:
        return sp.csr_matrix((R, m ** n), dtype=np.int64)
    faces = [(1, [grid[j] for j in range(1, n + 1)])]
    for i in range(1, n + 1):
        merged = T[grid[i - 1], grid[i]]
        faces.append(((-1) ** i, [grid[j] for j in range(i - 1)] + [merged]
                      + [grid[j] for j in range(i + 1, n + 1)]))
    faces.append(((-1) ** (n + 1), [grid[j] for j in range(n)]))
    rows, cols, vals = [], [], []
    r = np.arange(R)
    for sign, args in faces:
        ok, col = _column(args, m, R)
        rows.append(r[ok])
        cols.append(col[ok])
        vals.append(np.full(int(ok.sum()), sign % p, dtype=np.int64))
    D = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(R, m ** n))
    D.sum_duplicates()
    D.data %= p
    D.eliminate_zeros()
    return D


@dataclass(frozen=True, eq=False)
class CohomologySlice:
    """``H^n(G; GF(p))`` with chosen coordinates.

    ``coboundaries`` is an echelon basis of ``B^n``; ``complement`` is an
    echelon basis of a complement of ``B^n`` in ``Z^n`` whose rows are the
    cocycle representatives of the coordinate basis.
    """

    group: FiniteGroup
    p: int
    degree: int
    coboundaries: gfp.Echelon
    complement: gfp.Echelon
    cocycle_dimension: int

    @property
    def dimension(self) -> int:
        return self.complement.rank

    @property
    def coboundary_basis(self) -> np.ndarray:
        return self.coboundaries.rows

    @property
    def cocycle_basis(self) -> np.ndarray:
        return np.vstack([self.coboundaries.rows, self.complement.rows])

    @property
    def representatives(self) -> np.ndarray:
        return self.complement.rows

    def classify(self, cocycles: np.ndarray) -> np.ndarray:
        """Coordinates (one row per input cocycle)."""
        r = self.coboundaries.reduce(cocycles)
        return r[:, self.complement.pivots] % self.p

    def is_cocycle(self, cochain: np.ndarray) -> bool:
        D = coboundary_matrix(self.group, self.degree, self.p)
        v = np.asarray(cochain, dtype=np.int64).reshape(-1)
        return not np.any((D @ v) % self.p)


_SLICES: dict[tuple, CohomologySlice] = {}


def cochain_dimension(G: FiniteGroup, n: int) -> int:
    return (G.order - 1) ** n


def bar_cohomology(G: FiniteGroup, p: int, n: int,
                   budget: int = DEFAULT_COCHAIN_BUDGET) -> CohomologySlice:
    if n < 0:
        raise InputError("degree must be non-negative")
    size = cochain_dimension(G, n)
    if size > budget:
        raise BudgetExceeded(
            f"cochain space of dimension {size} exceeds budget {budget}; lower the degree cap")
    key = (G.table, p, n)
    hit = _SLICES.get(key)
    if hit is not None:
        return hit
    Dn = coboundary_matrix(G, n, p)
    Z = gfp.echelon(Dn, p).kernel()
    if n == 0:
        EB = gfp.echelon(np.zeros((0, 1), dtype=np.int64), p)
    else:
        EB = gfp.echelon(coboundary_matrix(G, n - 1, p).T.tocsr(), p)
    EC = gfp.echelon(EB.reduce(Z) if Z.shape[0] else Z.reshape(0, size), p)
    out = CohomologySlice(G, p, n, EB, EC, Z.shape[0])
    _SLICES[key] = out
    return out


def cohomology_dimensions(G: FiniteGroup, p: int, n_max: int = DEFAULT_MAX_DEGREE,
                          budget: int = DEFAULT_COCHAIN_BUDGET) -> list[int]:
    return [bar_cohomology(G, p, n, budget).dimension for n in range(n_max + 1)]


def check_dd(G: FiniteGroup, n: int, p: int) -> bool:
    """``d∘d = 0`` from ``C^n`` to ``C^{n+2}``."""
    prod = coboundary_matrix(G, n + 1, p) @ coboundary_matrix(G, n, p)
    prod.data %= p
    return prod.count_nonzero() == 0


# ---------------------------------------------------------------------------
# induced maps

def pullback(images: np.ndarray, codomain_order: int, domain_order: int, n: int,
             cochains: np.ndarray) -> np.ndarray:
    """Pull cochains on the codomain back along an element map.

    ``images[h]`` is the image of domain element ``h``.
    """
    mg, mh = codomain_order - 1, domain_order - 1
    cochains = np.atleast_2d(cochains)
    k = cochains.shape[0]
    if n == 0:
        return cochains.copy()
    grid = _tuples(mh, n)
    out = np.zeros((k, grid.shape[1]), dtype=np.int64)
    if grid.shape[1] == 0 or k == 0:
        return out
    ok, col = _column([images[row] for row in grid], mg, grid.shape[1])
    out[:, ok] = cochains[:, col[ok]]
    return out


def induced_map(f: GroupHom | tuple[FiniteGroup, FiniteGroup, np.ndarray],
                codomain: CohomologySlice, domain: CohomologySlice) -> np.ndarray:
    """Matrix of ``f^*: H^n(codomain) → H^n(domain)`` on coordinate columns.

    ``f`` is a GroupHom between whole groups, or a triple
    ``(domain_group, codomain_group, images)``.
    """
    if codomain.degree != domain.degree:
        raise InputError(f"degree mismatch: {codomain.degree} vs {domain.degree}")
    if codomain.p != domain.p:
        raise InputError("prime mismatch")
    if isinstance(f, GroupHom):
        src, dst = f.domain.parent, f.codomain.parent
        if f.domain.order != src.order:
            raise InputError("induced_map expects a map defined on a whole group")
        images = np.empty(src.order, dtype=np.int64)
        images[list(f.domain.elements)] = f.images
    else:
        src, dst, images = f
        images = np.asarray(images, dtype=np.int64)
    if src.order != domain.group.order or dst.order != codomain.group.order:
        raise InputError("map does not match the slices")
    reps = codomain.representatives
    if reps.shape[0] == 0 or domain.dimension == 0:
        return np.zeros((domain.dimension, codomain.dimension), dtype=np.int64)
    pulled = pullback(images, dst.order, src.order, codomain.degree, reps)
    return domain.classify(pulled).T.copy()


def subgroup_map(P: Subgroup, S: Subgroup, phi) -> tuple[FiniteGroup, FiniteGroup, np.ndarray]:
    """``phi: P → S`` (image tuple in parent indices) between standalone copies."""
    spos = S.position
    return P.as_group(), S.as_group(), np.array([spos[y] for y in phi], dtype=np.int64)


# ---------------------------------------------------------------------------
# stable elements

@dataclass
class StableSubspace:
    fusion: object
    degree: int
    basis: np.ndarray
    dimension: int
    ambient_dimension: int
    centric_dimension: int | None = None
    agrees_with_centric: bool | None = None


def _stable_basis(F, n: int, budget: int, only) -> tuple[np.ndarray, int]:
    S = F.S
    p = F.p
    HS = bar_cohomology(S.as_group(), p, n, budget)
    blocks = []
    for P in F.subgroups:
        if only is not None and not only(P):
            continue
        HP = bar_cohomology(P.as_group(), p, n, budget)
        if HP.dimension == 0 or HS.dimension == 0:
            continue
        res = induced_map(subgroup_map(P, S, P.elements), HS, HP)
        for phi in F.isos(P):
            if phi == P.elements:
                continue
            M = induced_map(subgroup_map(P, S, phi), HS, HP)
            blocks.append((M - res) % p)
    if not blocks:
        return np.eye(HS.dimension, dtype=np.int64), HS.dimension
    K = gfp.nullspace(np.vstack(blocks), p, HS.dimension)
    return K, HS.dimension


def stable_elements(F, n: int, budget: int = DEFAULT_COCHAIN_BUDGET,
                    cross_check: bool = True) -> StableSubspace:
    """Classes in ``H^n(S)`` on which every F-map agrees with restriction."""
    from .fusion import centric_subgroups
    K, amb = _stable_basis(F, n, budget, None)
    out = StableSubspace(F, n, K, K.shape[0], amb)
    if cross_check:
        cen = {P.mask for P in centric_subgroups(F)}
        Kc, _ = _stable_basis(F, n, budget, lambda P: P.mask in cen)
        out.centric_dimension = Kc.shape[0]
        out.agrees_with_centric = bool(Kc.shape[0] == K.shape[0]
                                       and (K.shape[0] == 0 or gfp.in_span(Kc, K, F.p)))
    return out


def stable_dimensions(F, n_max: int = DEFAULT_MAX_DEGREE,
                      budget: int = DEFAULT_COCHAIN_BUDGET) -> list[int]:
    return [stable_elements(F, n, budget, cross_check=False).dimension
            for n in range(n_max + 1)]


# ---------------------------------------------------------------------------
# amalgams

@dataclass
class MVData:
    degree: int
    alpha: np.ndarray
    vertex_dims: list[int]
    edge_dims: list[int]
    kernel: np.ndarray
    rank: int


def _alpha(model, p: int, n: int, budget: int) -> MVData:
    vs = [bar_cohomology(L, p, n, budget) for L in model.vertices]
    es = [bar_cohomology(e.group, p, n, budget) for e in model.edges]
    vdims = [h.dimension for h in vs]
    edims = [h.dimension for h in es]
    voff = np.concatenate([[0], np.cumsum(vdims)]).astype(int)
    eoff = np.concatenate([[0], np.cumsum(edims)]).astype(int)
    A = np.zeros((int(eoff[-1]), int(voff[-1])), dtype=np.int64)
    for j, e in enumerate(model.edges):
        if edims[j] == 0:
            continue
        rows = slice(eoff[j], eoff[j + 1])
        b = e.base
        A[rows, voff[b]:voff[b + 1]] += induced_map(e.into_base, vs[b], es[j])
        v = e.vertex
        A[rows, voff[v]:voff[v + 1]] -= induced_map(e.into_vertex, vs[v], es[j])
    A %= p
    K = gfp.nullspace(A, p, A.shape[1]) if A.shape[1] else np.zeros((0, 0), dtype=np.int64)
    rank = gfp.rank(A, p) if A.size else 0
    return MVData(n, A, vdims, edims, K, rank)


def mv_dimensions(model, p: int, n_max: int = DEFAULT_MAX_DEGREE,
                  budget: int = DEFAULT_COCHAIN_BUDGET) -> list[int]:
    """``dim H^n = dim ker α_n + dim coker α_{n-1}`` for the tree of groups."""
    out = []
    prev = None
    for n in range(n_max + 1):
        cur = _alpha(model, p, n, budget)
        dim = cur.kernel.shape[0]
        if prev is not None:
            dim += sum(prev.edge_dims) - prev.rank
        out.append(dim)
        prev = cur
    return out


@dataclass
class RestrictionReport:
    degree: int
    dim_HG: int
    dim_image_res: int
    dim_W: int
    dim_stable: int
    image_inside_stable: bool


def restriction_analysis(model, F, p: int, n: int,
                         budget: int = DEFAULT_COCHAIN_BUDGET) -> RestrictionReport:
    """Image and kernel of restriction from the amalgam to ``S``.

    Classes coming from the connecting map restrict to zero on every vertex,
    so the image of restriction is computed on the ``ker α_n`` summand.
    """
    from .errors import ModelError
    if model.sylow_map is None:
        raise ModelError("model malformed: S is not recorded inside the base vertex")
    if model.sylow_map.domain.parent.table != F.S.as_group().table:
        raise ModelError("model malformed: recorded S does not match the fusion system")
    dims = mv_dimensions(model, p, n, budget)
    cur = _alpha(model, p, n, budget)
    base = model.sylow_vertex
    Sg = model.sylow_map.domain.parent
    HS = bar_cohomology(Sg, p, n, budget)
    HL = bar_cohomology(model.vertices[base], p, n, budget)
    R = induced_map(model.sylow_map, HL, HS)
    lo = sum(cur.vertex_dims[:base])
    hi = lo + cur.vertex_dims[base]
    if cur.kernel.shape[0] and R.size:
        img = gfp.matmul_mod(R, cur.kernel[:, lo:hi].T, p).T
    else:
        img = np.zeros((0, HS.dimension), dtype=np.int64)
    dim_img = gfp.rank(img, p) if img.size else 0
    st = stable_elements(F, n, budget, cross_check=False)
    inside = gfp.in_span(st.basis, img, p) if img.size else True
    return RestrictionReport(n, dims[n], dim_img, dims[n] - dim_img, st.dimension, bool(inside))


# ---------------------------------------------------------------------------
# products

@dataclass
class KunnethRow:
    degree: int
    product_dimension: int
    convolution: int
    equal: bool


def kunneth_check(F1, F2, n_max: int = DEFAULT_MAX_DEGREE,
                  budget: int = DEFAULT_COCHAIN_BUDGET, product=None) -> list[KunnethRow]:
    from .fusion import product_fusion
    F = product if product is not None else product_fusion(F1, F2)
    d1 = stable_dimensions(F1, n_max, budget)
    d2 = stable_dimensions(F2, n_max, budget)
    d = stable_dimensions(F, n_max, budget)
    rows = []
    for n in range(n_max + 1):
        conv = sum(d1[i] * d2[n - i] for i in range(n + 1))
        rows.append(KunnethRow(n, d[n], conv, d[n] == conv))
    return rows
