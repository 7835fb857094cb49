import pytest
from hypothesis import given, strategies as st

from fusec import groups as gr
from fusec import library
from fusec.errors import GroupTooLarge, InputError, NotASubgroup

SMALL = ["C1", "C2", "C6", "S3", "D8", "Q8", "A4", "C3:C4", "S4", "C7:C3", "SL(2,3)"]
groups = st.sampled_from(SMALL).map(library.named_group)


def test_corpus_has_74_distinct_classes():
    C = library.corpus()
    assert len(C) == 74
    assert all(G.order <= 24 for G in C)
    # isomorphism invariants: element orders, subgroup and normalizer orders, |Z|, |G'|
    sigs = set()
    for G in C:
        subs = gr.subgroups(G, 10_000)
        sigs.add((G.order, tuple(sorted(G.element_orders)), tuple(s.order for s in subs),
                  tuple(sorted(gr.normalizer(G, s).order for s in subs)),
                  gr.center(G).order, gr.commutator_subgroup(G).order))
    assert len(sigs) == 74


@given(groups, st.data())
def test_table_axioms(G, data):
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    t = G.table
    assert t[t[a][b]][c] == t[a][t[b][c]]
    assert t[a][0] == a == t[0][a]
    assert t[a][G.inverse[a]] == 0


@given(groups, st.data())
def test_generated_subgroup_is_closed(G, data):
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    H = gr.generate(G, gens)
    assert G.order % H.order == 0
    assert all(G.table[a][b] in H for a in H for b in H)
    assert gr.make_subgroup(G, H.elements) == H


@given(groups, st.data())
def test_normalizer_and_centralizer(G, data):
    subs = gr.subgroups(G)
    P = data.draw(st.sampled_from(subs))
    N = gr.normalizer(G, P)
    C = gr.centralizer(G, P)
    assert C <= N and P <= N
    for g in range(G.order):
        assert (g in N) == (gr.conjugate(P, g) == P)
        assert (g in C) == all(G.conj(g, x) == x for x in P)


@pytest.mark.parametrize("name,p,order", [("S4", 2, 8), ("S4", 3, 3), ("A4", 2, 4),
                                          ("SL(2,3)", 2, 8), ("C7:C3", 3, 3), ("C1", 2, 1)])
def test_sylow_orders(name, p, order):
    G = library.named_group(name)
    S = gr.sylow_p(G, p)
    assert S.order == order
    Syl = gr.sylow_subgroups(G, p)
    assert len(Syl) % p == 1 % p and G.order % len(Syl) == 0


def test_o_p_and_thompson():
    S4 = library.named_group("S4")
    assert gr.o_p(S4, 2).order == 4
    assert gr.o_p(S4, 3).order == 1
    D8 = library.named_group("D8")
    # two Klein four-subgroups generate D8
    assert gr.thompson_subgroup(D8).order == 8
    Q8 = library.named_group("Q8")
    assert gr.thompson_subgroup(Q8).order == 8
    assert gr.thompson_subgroup(library.named_group("C4xC2")).order == 8


def test_quotient_and_commutator():
    S4 = library.named_group("S4")
    V = gr.o_p(S4, 2)
    Q, proj = gr.quotient(S4, V)
    assert Q.order == 6 and not Q.is_abelian()
    assert gr.commutator_subgroup(S4).order == 12
    assert gr.max_p_perfect(S4, 2).order == 12 or gr.max_p_perfect(S4, 2).order == 1
    assert all(Q.table[proj[a]][proj[b]] == proj[S4.table[a][b]]
               for a in range(24) for b in range(24))


@pytest.mark.parametrize("name,n", [("C2", 1), ("V4", 6), ("D8", 8), ("Q8", 24), ("C3:C4", 12)])
def test_automorphism_counts(name, n):
    assert len(gr.automorphisms(library.named_group(name))) == n


def test_isomorphism_search():
    D8 = library.named_group("D8")
    Q8 = library.named_group("Q8")
    assert not gr.isomorphisms(D8, Q8, first_only=True)
    S3 = library.named_group("S3")
    D6 = library.dihedral(6)
    assert len(gr.isomorphisms(S3, D6)) == 6


def test_direct_product_subgroups():
    C2 = library.cyclic(2)
    V = gr.direct_product(C2, C2)
    assert len(gr.subgroups(V)) == 5


def test_input_errors():
    with pytest.raises(InputError):
        gr.from_cayley([[0, 1], [1, 1]])
    with pytest.raises(InputError):
        gr.from_permutation_generators(3, [[0, 0, 1]])
    with pytest.raises(NotASubgroup):
        gr.make_subgroup(library.named_group("S3"), [0, 1])
    with pytest.raises(GroupTooLarge):
        gr.from_permutation_generators(8, [[1, 2, 3, 4, 5, 6, 7, 0], [1, 0, 2, 3, 4, 5, 6, 7]],
                                       bound=1000)
    with pytest.raises(InputError):
        library.named_group("nonsense")


def test_permutation_composition_convention():
    # right factor first
    G = gr.from_permutation_generators(3, [[1, 0, 2], [0, 2, 1]])
    assert G.order == 6
    a, b = (1, 0, 2), (0, 2, 1)
    assert gr.perm_mul(a, b) == tuple(a[b[i]] for i in range(3))
