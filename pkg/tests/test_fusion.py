import pytest
from hypothesis import given, strategies as st

from fusec import fusion as fu
from fusec import groups as gr
from fusec import library
from fusec.errors import BudgetExceeded, InputError, NotFullyNormalized
from oracles import primes_of

CORPUS = {G.name: G for G in library.corpus()}
CASES = [(name, p) for name, G in CORPUS.items() for p in primes_of(G.order)]
SMALL_CASES = [("S4", 2), ("A4", 2), ("D8", 2), ("S3", 3), ("C3:C4", 3), ("C7:C3", 7),
               ("SL(2,3)", 2), ("S3xC3", 3), ("C2^2xS3", 2), ("C3^2:C2", 3)]


def invariants(F: fu.FusionSystem) -> dict:
    return {
        "order_S": F.S.order,
        "subgroups": len(F.subgroups),
        "classes": len(F.classes()),
        "isomorphisms": F.n_isos,
        "aut_orders": sorted(len(F.aut_maps(P)) for P in F.subgroups),
        "centric": len(fu.centric_subgroups(F)),
        "order_Z_S": gr.center(F.S).order,
        "order_Z_F": fu.fusion_center(F).order,
        "order_J": gr.thompson_subgroup(F.S).order,
    }


@pytest.mark.parametrize("name,p", CASES)
def test_fusion_of_group_matches_oracle(name, p, oracle):
    F = fu.fusion_of_group(CORPUS[name], p)
    assert invariants(F) == oracle["fusion"][f"{name}@{p}"]


@pytest.fixture(scope="module")
def systems():
    return {(n, p): fu.fusion_of_group(library.named_group(n), p) for n, p in SMALL_CASES}


@given(st.sampled_from(SMALL_CASES), st.data())
def test_closed_under_composition_and_inverse(systems, case, data):
    F = systems[case]
    P = data.draw(st.sampled_from(F.subgroups))
    phi = data.draw(st.sampled_from(F.isos(P)))
    Q = F.subgroup_of(phi)
    psi = data.draw(st.sampled_from(F.isos(Q)))
    pos = Q.position
    comp = tuple(psi[pos[y]] for y in phi)
    assert comp in F.isos(P)
    back = dict(zip(phi, P.elements))
    assert tuple(back[y] for y in Q.elements) in F.isos(Q)


@given(st.sampled_from(SMALL_CASES), st.data())
def test_closed_under_restriction(systems, case, data):
    F = systems[case]
    P = data.draw(st.sampled_from(F.subgroups))
    phi = data.draw(st.sampled_from(F.isos(P)))
    R = data.draw(st.sampled_from([R for R in F.subgroups if R <= P]))
    pos = P.position
    assert tuple(phi[pos[x]] for x in R.elements) in F.isos(R)


@pytest.mark.parametrize("case", SMALL_CASES)
def test_regenerating_is_idempotent(systems, case):
    F = systems[case]
    G1 = fu.generate_fusion(fu.generators_of(F))
    G2 = fu.generate_fusion(fu.generators_of(F), order="compose-first")
    assert G1 == F == G2


def _v4_with(autos):
    V = library.klein()
    maps = [f for f in gr.automorphisms(V) if f.images in autos]
    return V, fu.FusionGenerators(V.whole, 2, maps)


def test_generated_v4_order_three(oracle):
    V, gens = _v4_with({(0, 2, 3, 1)})
    F = fu.generate_fusion(gens)
    assert len(F.aut(V.whole)) == 3
    assert fu.is_saturated(F)
    # same invariants as the fusion system of A4
    assert invariants(F) == oracle["fusion"]["A4@2"]


def test_unsaturated_swap_on_v4():
    V, gens = _v4_with({(0, 2, 1, 3)})
    F = fu.generate_fusion(gens)
    assert not fu.check_axioms(F)
    rep = fu.is_saturated(F)
    assert not rep and rep.axiom == "Sylow"


def test_budget_is_enforced():
    V, gens = _v4_with({(0, 2, 3, 1)})
    with pytest.raises(BudgetExceeded):
        fu.generate_fusion(gens, budget=3)


def test_generator_validation():
    S4 = library.named_group("S4")
    with pytest.raises(InputError):
        fu.FusionGenerators(S4.whole, 2, [])
    V = library.klein()
    bad = gr.GroupHom(V.whole, V.whole, (0, 1, 1, 0))
    with pytest.raises(InputError):
        fu.FusionGenerators(V.whole, 2, [bad])
    with pytest.raises(InputError):
        fu.generate_fusion(fu.FusionGenerators(V.whole, 2, []), order="sideways")


def test_redundant_generators():
    V, gens = _v4_with({(0, 2, 3, 1), (0, 3, 1, 2)})
    assert fu.redundant_generators(gens) == [0, 1]


def test_s4_subgroup_predicates(systems):
    F = systems[("S4", 2)]
    orders = sorted(P.order for P in fu.centric_subgroups(F) if fu.is_radical(F, P))
    assert orders == [4, 8]
    ess = fu.essential_subgroups(F)
    assert [P.order for P in ess] == [4]
    assert fu.is_strongly_closed(F, ess[0])
    assert fu.has_strongly_p_embedded(F.out_group(ess[0]), 2)
    assert F.out_group(ess[0]).order == 6
    assert not fu.is_strongly_closed(F, gr.center(F.S))


def test_a4_aut_of_sylow(systems):
    F = systems[("A4", 2)]
    assert len(F.aut(F.S)) == 3
    assert F.out_group(F.S).order == 3


def test_fully_normalized_and_subsystems(systems):
    F = systems[("S4", 2)]
    invols = [P for P in F.subgroups if P.order == 2]
    bad = [P for P in invols if not F.is_fully_normalized(P)]
    assert bad
    with pytest.raises(NotFullyNormalized):
        fu.normalizer_subsystem(F, bad[0])
    good = F.fully_normalized_conjugate(bad[0])
    assert F.is_fully_normalized(good) and F.is_fully_centralized(good)
    N = fu.normalizer_subsystem(F, good)
    assert N.S == gr.normalizer(F.S, good)
    assert not fu.check_axioms(N)
    C = fu.centralizer_subsystem(F, gr.center(F.S))
    assert C == fu.inner_fusion(F.S, 2)


@pytest.mark.parametrize("case", SMALL_CASES)
def test_fusion_center_is_fixed(systems, case):
    F = systems[case]
    Z = fu.fusion_center(F)
    for P, phi in F.morphisms():
        for x, y in zip(P.elements, phi):
            if x in Z:
                assert x == y


def test_transport_round_trip(systems):
    F = systems[("S4", 2)]
    Sg = F.S.as_group()
    iso = gr.GroupHom(F.S, Sg.whole, list(range(Sg.order)))
    T = fu.transport(F, iso)
    back = fu.transport(T, gr.GroupHom(Sg.whole, F.S, F.S.elements))
    assert back == F
    assert T.n_isos == F.n_isos


def test_product_of_inner_is_inner():
    C2 = library.cyclic(2)
    F1 = fu.inner_fusion(C2, 2)
    P = fu.product_fusion(F1, F1)
    assert P.n_isos == 5  # V4 with identity maps only
    A4 = fu.fusion_of_group(library.named_group("A4"), 2)
    Q = fu.product_fusion(A4, F1)
    assert fu.is_saturated(Q)
    assert len(Q.aut(Q.S)) == 3
