import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fusec import fusion as fu
from fusec import groups as gr
from fusec import library
from fusec import models as mo
from fusec.errors import InputError, ModelError, PresentationError

S4 = library.named_group("S4")


@pytest.fixture(scope="module")
def s4_model():
    return mo.robinson_model(S4, 2)


@pytest.fixture(scope="module")
def s4_fusion():
    return fu.fusion_of_group(S4, 2)


def test_s4_robinson_shape(s4_model):
    assert [L.order for L in s4_model.vertices] == [8, 24]
    assert [e.group.order for e in s4_model.edges] == [8]
    assert all(all(c.values()) for c in s4_model.conditions.values())


@pytest.mark.parametrize("flavor,orders", [("centric-radical", [8, 24]),
                                           ("centric", [8, 8, 24, 8]),
                                           ("essential", [8, 24])])
def test_flavors_all_verify(flavor, orders, s4_fusion):
    M = mo.robinson_model(S4, 2, flavor, s4_fusion)
    assert [L.order for L in M.vertices] == orders
    assert mo.verify_model(M, s4_fusion)
    assert mo.euler_characteristic(M).chi == Fraction(1, 24)


@pytest.mark.parametrize("name,p", [("A4", 2), ("C3:C4", 3), ("C7:C3", 7), ("SL(2,3)", 2),
                                    ("C3:D8", 2), ("C3^2:C2", 3), ("C2^2xS3", 2)])
def test_other_groups_verify(name, p):
    G = library.named_group(name)
    F = fu.fusion_of_group(G, p)
    M = mo.robinson_model(G, p, F=F)
    assert mo.verify_model(M, F)


def test_verify_detects_wrong_system(s4_model):
    D8 = library.named_group("D8")
    wrong = fu.inner_fusion(D8, 2)
    v = mo.verify_model(s4_model, wrong)
    assert not v and "first difference" in v.describe()


def test_unknown_flavor():
    with pytest.raises(InputError):
        mo.robinson_model(S4, 2, "quasi")


def test_refine_s4_vertex_split(s4_model, s4_fusion):
    e = s4_model.edges[0]
    R = mo.refine_model(s4_model, {1: [e.vertex_image, s4_model.vertices[1].whole]})
    assert [L.order for L in R.vertices] == [8, 8, 24]
    assert mo.verify_model(R, s4_fusion)
    assert mo.euler_characteristic(R).chi == Fraction(1, 24)


def test_refine_rejects_pieces_missing_the_edge(s4_model):
    e = s4_model.edges[0]
    A4 = next(H for H in gr.subgroups(s4_model.vertices[1]) if H.order == 12)
    with pytest.raises(ModelError):
        mo.refine_model(s4_model, {1: [e.vertex_image, A4]})


def test_refine_nothing_is_identity(s4_model):
    assert mo.refine_model(s4_model, {}).signature() == s4_model.signature()


def test_refine_proper_split_of_center():
    S3 = library.named_group("S3")
    G = gr.direct_product(S3, S3)
    F = fu.fusion_of_group(G, 3)
    M = mo.robinson_model(G, 3, F=F)
    L = M.vertices[0]
    Ks = [K for K in gr.subgroups(L) if K.order == 18 and M.S <= K]
    pair = next((a, b) for a, b in itertools.combinations(Ks, 2) if gr.join(a, b).order == 36)
    R = mo.refine_model(M, {0: list(pair)})
    assert [K.order for K in R.vertices] == [18, 18]
    assert mo.verify_model(R, F)
    e = mo.euler_characteristic(R)
    assert e.chi == 0 and e.d == 0 and e.sign == 0


def test_euler_values():
    assert mo.euler_characteristic(mo.single_vertex_model(library.named_group("A4"), 2)).chi \
        == Fraction(1, 12)
    C2, C1 = library.cyclic(2), library.cyclic(1)
    M = mo.two_vertex_model(C2, C2, C1, [0], [0], 2)
    e = mo.euler_characteristic(M)
    assert e.chi == 0 and e.integral


def test_malformed_models():
    C2, C4 = library.cyclic(2), library.cyclic(4)
    with pytest.raises(ModelError):
        mo.two_vertex_model(C2, C4, C2, [0, 1], [0, 3], 2)  # [0, 3] is not a homomorphism
    with pytest.raises(ModelError):
        mo.StarOfGroups([C2], [], 2, sylow_vertex=3)


def test_perm_rep_s4(s4_model):
    r = mo.free_kernel_perm_rep(s4_model)
    c = mo.check_perm_rep(r)
    assert c.ok and c.degree == 8 and c.kernel_index == 24
    _, lin = mo.linearize(r, 2)
    assert lin.S_free and lin.S_free_rank == 1 and lin.vertex_ok


def test_perm_rep_with_chosen_subgroups(s4_model):
    H = [s4_model.vertices[0].trivial, s4_model.vertices[1].trivial]
    r = mo.free_kernel_perm_rep(s4_model, H)
    c = mo.check_perm_rep(r)
    assert c.ok and c.degree == 24


def test_perm_rep_free_product():
    C2, C1 = library.cyclic(2), library.cyclic(1)
    M = mo.two_vertex_model(C2, C2, C1, [0], [0], 2)
    r = mo.free_kernel_perm_rep(M)
    c = mo.check_perm_rep(r)
    assert c.ok and c.edge_compatible


# -- normal forms -----------------------------------------------------------

def _to_s4(model):
    """Letters of the degenerate model mapped into the S4 vertex."""
    e = model.edges[0]
    down = dict(zip(e.into_base.images, e.into_vertex.images))

    def f(v, x):
        return x if v == 1 else down[x]
    return f


letters = st.lists(st.tuples(st.integers(0, 1), st.integers(0, 23)), max_size=8)


@given(letters)
def test_normal_form_of_degenerate_amalgam_is_s4(s4_model, word):
    word = [(v, x % s4_model.vertices[v].order) for v, x in word]
    nf = mo.NormalForms(s4_model)
    f = _to_s4(s4_model)
    prod = 0
    for v, x in word:
        prod = S4.table[prod][f(v, x)]
    w = nf.normal_form(word)
    assert w == nf.normal_form([(1, prod)])
    assert w.syllables <= 1


@given(letters, letters, letters)
def test_multiplication_is_associative(s4_model, a, b, c):
    nf = mo.NormalForms(s4_model)
    fix = [[(v, x % s4_model.vertices[v].order) for v, x in w] for w in (a, b, c)]
    u, v, w = (nf.normal_form(x) for x in fix)
    assert nf.multiply(nf.multiply(u, v), w) == nf.multiply(u, nf.multiply(v, w))
    assert nf.multiply(u, nf.inverse(u)).is_identity()
    assert nf.multiply(u, v) == nf.normal_form(fix[0] + fix[1])


@given(st.lists(st.integers(0, 1), max_size=10))
def test_free_product_words_are_reduced(bits):
    C2, C1 = library.cyclic(2), library.cyclic(1)
    M = mo.two_vertex_model(C2, C2, C1, [0], [0], 2)
    nf = mo.NormalForms(M)
    word = [(b, 1) for b in bits]
    red = []
    for b in bits:
        if red and red[-1] == b:
            red.pop()
        else:
            red.append(b)
    assert nf.normal_form(word).length == len(red)


def test_bad_letter():
    M = mo.single_vertex_model(library.named_group("A4"), 2)
    with pytest.raises(InputError):
        mo.normal_form(M, [(2, 0)])


# -- presentations ----------------------------------------------------------

def _v4_gens(auts):
    V = library.klein()
    return fu.FusionGenerators(V.whole, 2, [f for f in gr.automorphisms(V) if f.images in auts])


def test_finite_order_presentation_maps_onto_a4():
    H = mo.finite_order_presentation(_v4_gens({(0, 2, 3, 1)}))
    ab = mo.abelianization(H, 2)
    assert ab.invariant_factors == [3] and ab.free_rank == 0 and ab.h1_dimension == 0
    words = H.element_words
    V = H.S.parent
    # V4 acting regularly on itself, t any permutation making the relators hold
    reg = {x: tuple(V.table[x][y] for y in range(4)) for x in range(4)}
    sg = [reg[x] for x in H.S.generators]
    found = []
    for t in itertools.permutations(range(4)):
        ok, order = mo.permutation_quotient(H, sg + [t])
        if ok:
            found.append(order)
    assert 12 in found
    assert words[0] == ()


def test_leary_stancu_is_infinite():
    H = mo.leary_stancu_presentation(_v4_gens({(0, 2, 3, 1)}))
    ab = mo.abelianization(H, 2)
    assert ab.free_rank == 1 and ab.h1_dimension == 1


def test_finite_order_rejections():
    with pytest.raises(PresentationError, match="coprime"):
        mo.finite_order_presentation(_v4_gens({(0, 2, 1, 3)}))
    with pytest.raises(PresentationError, match="minimality"):
        mo.finite_order_presentation(_v4_gens({(0, 2, 3, 1), (0, 3, 1, 2)}))


def test_trivial_presentation():
    H = mo.leary_stancu_presentation(fu.FusionGenerators(library.cyclic(2).whole, 2, []))
    assert H.format() == "< s1 | s1*s1 >"


@given(st.lists(st.integers(-3, 3).filter(bool), max_size=12))
def test_free_reduce(w):
    r = mo.free_reduce(tuple(w))
    assert mo.free_reduce(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))
    assert mo.free_reduce(tuple(w) + mo.word_inverse(tuple(w))) == ()


def test_star_abelianization():
    assert mo.abelianization(mo.single_vertex_model(S4, 2), 2).invariant_factors == [2]
    C2, C1 = library.cyclic(2), library.cyclic(1)
    M = mo.two_vertex_model(C2, C2, C1, [0], [0], 2)
    assert mo.abelianization(M, 2).describe() == "Z/2 + Z/2"
