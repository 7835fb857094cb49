"""Named small groups and the test corpus (every group of order at most 24)."""
from __future__ import annotations

from collections.abc import Callable, Sequence

from .errors import InputError
from .groups import (FiniteGroup, direct_product, from_generators,
                     from_permutation_generators)


def cyclic(n: int) -> FiniteGroup:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inverse = tuple((-a) % n for a in range(n))
    return FiniteGroup(table, inverse, None, None, f"C{n}")


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def _semidirect_table(n: int, m: int, act: Callable[[int, int], int]):
    # element x^a y^b has index a + n*b
    def mul(u, v):
        a1, b1 = u % n, u // n
        a2, b2 = v % n, v // n
        return (a1 + act(b1, a2)) % n + n * ((b1 + b2) % m)

    N = n * m
    table = tuple(tuple(mul(u, v) for v in range(N)) for u in range(N))
    inverse = tuple(row.index(0) for row in table)
    return table, inverse


def metacyclic(n: int, m: int, r: int, name: str = "") -> FiniteGroup:
    """``C_n ⋊ C_m`` with the generator of ``C_m`` acting as ``x ↦ x^r``."""
    if pow(r, m, n) != 1 % n:
        raise InputError(f"x -> x^{r} does not have order dividing {m} mod {n}")
    powers = [pow(r, b, n) for b in range(m)]
    table, inverse = _semidirect_table(n, m, lambda b, a: powers[b] * a)
    return FiniteGroup(table, inverse, None, None, name or f"C{n}:C{m}")


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order (``D8`` has order 8)."""
    return metacyclic(order // 2, 2, -1 % (order // 2) if order > 4 else 1, name=f"D{order}")


def dicyclic(n: int) -> FiniteGroup:
    """``⟨a, x | a^{2n}, x² = a^n, x a x⁻¹ = a⁻¹⟩`` of order ``4n``."""
    k = 2 * n

    def mul(u, v):
        i, j = u % k, u // k
        a, b = v % k, v // k
        e = i + (a if j == 0 else -a)
        if j and b:
            e += n
        return (e % k) + k * (j ^ b)

    N = 2 * k
    table = tuple(tuple(mul(u, v) for v in range(N)) for u in range(N))
    inverse = tuple(row.index(0) for row in table)
    name = "Q8" if n == 2 else ("Q16" if n == 4 else f"Dic{n}")
    return FiniteGroup(table, inverse, None, None, name)


def quaternion() -> FiniteGroup:
    return dicyclic(2)


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return from_permutation_generators(1, [[0]], name="S1")
    cycle = list(range(1, n)) + [0]
    swap = [1, 0] + list(range(2, n))
    gens = [cycle, swap] if n > 2 else [swap]
    return from_permutation_generators(n, gens, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return from_permutation_generators(max(n, 1), [list(range(max(n, 1)))], name=f"A{n}")
    gens = []
    for k in range(2, n):
        perm = list(range(n))
        perm[0], perm[1], perm[k] = 1, k, 0  # (0 1 k)
        gens.append(perm)
    return from_permutation_generators(n, gens, name=f"A{n}")


def semidirect_product(N: FiniteGroup, H: FiniteGroup,
                       action: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """``N ⋊ H``; ``action[h]`` is the automorphism of ``N`` induced by ``h``.

    Element ``(n, h)`` has index ``n + |N| * h``.
    """
    nn, nh = N.order, H.order
    tn, th = N.table, H.table

    def mul(u, v):
        n1, h1 = u % nn, u // nn
        n2, h2 = v % nn, v // nn
        return tn[n1][action[h1][n2]] + nn * th[h1][h2]

    M = nn * nh
    table = tuple(tuple(mul(u, v) for v in range(M)) for u in range(M))
    inverse = tuple(row.index(0) for row in table)
    return FiniteGroup(table, inverse, None, None, name)


def action_from_generators(H: FiniteGroup, gens: Sequence[int],
                           images: Sequence[Sequence[int]], degree: int) -> list[tuple[int, ...]]:
    """Extend automorphisms assigned to generators of ``H`` to all of ``H``."""
    act: dict[int, tuple[int, ...]] = {0: tuple(range(degree))}
    queue = [0]
    for x in queue:
        for s, img in zip(gens, images):
            y = H.table[x][s]
            val = tuple(act[x][img[i]] for i in range(degree))
            if y not in act:
                act[y] = val
                queue.append(y)
            elif act[y] != val:
                raise InputError("generator action is not a homomorphism")
    if len(act) != H.order:
        raise InputError("generators do not generate H")
    return [act[h] for h in range(H.order)]


def matrix_group(gens: Sequence[Sequence[Sequence[int]]], q: int, name: str = "") -> FiniteGroup:
    """Group generated by square matrices over ``Z/q``."""
    k = len(gens[0])

    def flat(m):
        return tuple(int(x) % q for row in m for x in row)

    def mul(a, b):
        return tuple(sum(a[i * k + t] * b[t * k + j] for t in range(k)) % q
                     for i in range(k) for j in range(k))

    ident = tuple(1 if i == j else 0 for i in range(k) for j in range(k))
    G, _ = from_generators([flat(g) for g in gens], mul, ident, name=name)
    return G


def sl2_3() -> FiniteGroup:
    return matrix_group([[[1, 1], [0, 1]], [[0, 1], [2, 0]]], 3, name="SL(2,3)")


def pauli() -> FiniteGroup:
    """Central product ``C4 ∘ D8`` realised by Pauli matrices over GF(5) (i = 2)."""
    return matrix_group([[[0, 1], [1, 0]], [[1, 0], [0, 4]], [[2, 0], [0, 2]]], 5, name="C4oD8")


def _dp(*gs: FiniteGroup) -> FiniteGroup:
    out = gs[0]
    for g in gs[1:]:
        out = direct_product(out, g)
    out = FiniteGroup(out.table, out.inverse, None, None, "x".join(g.name for g in gs))
    return out


def _named(G: FiniteGroup, name: str) -> FiniteGroup:
    return FiniteGroup(G.table, G.inverse, G.labels, G.origin, name)


def klein() -> FiniteGroup:
    return _named(_dp(cyclic(2), cyclic(2)), "V4")


def c2sq_semidirect_c4() -> FiniteGroup:
    """``(C2 × C2) ⋊ C4`` with the generator of C4 swapping the two factors."""
    V = _dp(cyclic(2), cyclic(2))
    swap = (0, 2, 1, 3)  # (a,b) -> (b,a) under index a*2+b
    act = action_from_generators(cyclic(4), [1], [swap], 4)
    return semidirect_product(V, cyclic(4), act, name="C2^2:C4")


def c3_semidirect_d8() -> FiniteGroup:
    """``C3 ⋊ D8`` where a Klein four-subgroup of D8 acts trivially."""
    D = dihedral(8)  # index r^i s^j = i + 4j; r = 1, s = 4
    inv = (0, 2, 1)
    # kernel {1, r^2, s, r^2 s}: r inverts, s centralizes
    act = action_from_generators(D, [1, 4], [inv, (0, 1, 2)], 3)
    return semidirect_product(cyclic(3), D, act, name="C3:D8")


def c3sq_inverted() -> FiniteGroup:
    A = _dp(cyclic(3), cyclic(3))
    neg = tuple(((-(x // 3)) % 3) * 3 + ((-(x % 3)) % 3) for x in range(9))
    act = action_from_generators(cyclic(2), [1], [neg], 9)
    return semidirect_product(A, cyclic(2), act, name="C3^2:C2")


_BUILDERS: dict[str, Callable[[], FiniteGroup]] = {
    "C1": lambda: cyclic(1),
    "V4": klein,
    "C2^2": lambda: _named(klein(), "C2^2"),
    "C2^3": lambda: _dp(cyclic(2), cyclic(2), cyclic(2)),
    "C2^4": lambda: _dp(cyclic(2), cyclic(2), cyclic(2), cyclic(2)),
    "C3^2": lambda: _dp(cyclic(3), cyclic(3)),
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "A4": lambda: alternating(4),
    "D8": lambda: dihedral(8),
    "Q8": quaternion,
    "Q16": lambda: dicyclic(4),
    "SD16": lambda: metacyclic(8, 2, 3, "SD16"),
    "M16": lambda: metacyclic(8, 2, 5, "M16"),
    "D16": lambda: dihedral(16),
    "C4:C4": lambda: metacyclic(4, 4, 3, "C4:C4"),
    "C2^2:C4": c2sq_semidirect_c4,
    "C4oD8": pauli,
    "C3:C4": lambda: metacyclic(3, 4, 2, "C3:C4"),
    "C3:C8": lambda: metacyclic(3, 8, 2, "C3:C8"),
    "C5:C4": lambda: metacyclic(5, 4, 4, "C5:C4"),
    "F20": lambda: metacyclic(5, 4, 2, "F20"),
    "C7:C3": lambda: metacyclic(7, 3, 2, "C7:C3"),
    "Dic6": lambda: dicyclic(6),
    "SL(2,3)": sl2_3,
    "C3:D8": c3_semidirect_d8,
    "C3^2:C2": c3sq_inverted,
    "S3xC3": lambda: _dp(symmetric(3), cyclic(3)),
    "S3xS3": lambda: _dp(symmetric(3), symmetric(3)),
}


def named_group(name: str) -> FiniteGroup:
    """Look up a group by name: ``C<n>``, ``D<order>``, ``S<n>``, ``A<n>``, or a builder key."""
    if name in _BUILDERS:
        G = _BUILDERS[name]()
        return G if G.name == name else _named(G, name)
    if "x" in name:
        parts = name.split("x")
        try:
            return _named(_dp(*(named_group(p) for p in parts)), name)
        except InputError:
            pass
    kind, rest = name[:1], name[1:]
    if rest.isdigit():
        n = int(rest)
        if kind == "C" and n >= 1:
            return cyclic(n)
        if kind == "D" and n >= 4 and n % 2 == 0:
            return dihedral(n)
        if kind == "S" and 1 <= n <= 6:
            return symmetric(n)
        if kind == "A" and 3 <= n <= 6:
            return alternating(n)
    raise InputError(f"unknown group name {name!r}")


# Every group of order <= 24 up to isomorphism, one representative each.
CORPUS_NAMES: tuple[str, ...] = (
    "C1", "C2", "C3", "C4", "C2^2", "C5", "C6", "S3", "C7",
    "C8", "C4xC2", "C2^3", "D8", "Q8",
    "C9", "C3^2", "C10", "D10", "C11",
    "C12", "C6xC2", "D12", "A4", "C3:C4", "C13", "C14", "D14", "C15",
    "C16", "C4xC4", "C8xC2", "C4xC2xC2", "C2^4", "D16", "Q16", "SD16", "M16",
    "C4:C4", "C2^2:C4", "D8xC2", "Q8xC2", "C4oD8",
    "C17", "C18", "C6xC3", "D18", "S3xC3", "C3^2:C2", "C19",
    "C20", "C10xC2", "D20", "C5:C4", "F20", "C21", "C7:C3", "C22", "D22", "C23",
    "C3:C8", "C24", "SL(2,3)", "Dic6", "C4xS3", "D24", "C2xC3:C4", "C3:D8",
    "C12xC2", "C3xD8", "C3xQ8", "S4", "C2xA4", "C2^2xS3", "C6xC2xC2",
)

EXTRA_NAMES: tuple[str, ...] = ("A4", "S4", "D8", "Q8", "C3:C4", "C7:C3", "S3xC3")


def corpus() -> list[FiniteGroup]:
    """Representatives of the 74 isomorphism classes of groups of order <= 24."""
    out = []
    for name in CORPUS_NAMES:
        if name == "C2xC3:C4":
            G = _named(_dp(cyclic(2), named_group("C3:C4")), name)
        elif name == "C2^2xS3":
            G = _named(_dp(cyclic(2), cyclic(2), symmetric(3)), name)
        else:
            G = named_group(name)
        out.append(G)
    return out
