import numpy as np
import pytest
from hypothesis import given, strategies as st

from fusec import cohomology as co
from fusec import fusion as fu
from fusec import groups as gr
from fusec import library
from fusec import models as mo
from fusec.errors import BudgetExceeded, InputError
import oracles

CASES = [(n, p, k) for n, p, k in oracles.COHOMOLOGY_CASES]

# Degree-3 values of the Poincaré series, beyond the reach of the unnormalized oracle.
KNOWN = {("A4", 2): [1, 0, 1, 2], ("S4", 2): [1, 1, 2, 3], ("C3:C4", 3): [1, 0, 0, 1]}


@pytest.mark.parametrize("name,p,n", CASES)
def test_dimensions_match_oracle(name, p, n, oracle):
    G = library.named_group(name)
    assert co.cohomology_dimensions(G, p, n) == oracle["cohomology"][f"{name}@{p}"]


@pytest.mark.parametrize("name,p", sorted(KNOWN))
def test_dimensions_known_series(name, p):
    assert co.cohomology_dimensions(library.named_group(name), p, 3) == KNOWN[(name, p)]


def test_oracle_file_is_fresh(oracle):
    for name, p, n in oracles.COHOMOLOGY_CASES[:4]:
        dims = oracles.cohomology_dims(library.named_group(name).table, p, n)
        assert dims == oracle["cohomology"][f"{name}@{p}"]
    for name, p in [("S4", 2), ("C3:C4", 3)]:
        inv = oracles.fusion_invariants(library.named_group(name).table, p)
        assert inv == oracle["fusion"][f"{name}@{p}"]


@pytest.mark.parametrize("name,p", [("S3", 2), ("D8", 2), ("A4", 2), ("C3:C4", 3)])
def test_dd_vanishes(name, p):
    G = library.named_group(name)
    assert all(co.check_dd(G, n, p) for n in range(3))


def test_budget():
    with pytest.raises(BudgetExceeded, match="degree"):
        co.bar_cohomology(library.named_group("S4"), 2, 4)
    with pytest.raises(InputError):
        co.bar_cohomology(library.cyclic(2), 2, -1)


SLICES = [("V4", 2, 2), ("D8", 2, 2), ("S3", 3, 3), ("Q8", 2, 2), ("A4", 2, 2)]


@given(st.sampled_from(SLICES), st.data())
def test_classify_ignores_coboundaries(case, data):
    name, p, n = case
    G = library.named_group(name)
    H = co.bar_cohomology(G, p, n)
    coeff = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=H.dimension,
                                        max_size=H.dimension)), dtype=np.int64)
    z = (coeff @ H.representatives) % p if H.dimension else np.zeros(H.coboundary_basis.shape[1], dtype=np.int64)
    m = co.cochain_dimension(G, n - 1)
    c = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m, max_size=m)), dtype=np.int64)
    dc = (co.coboundary_matrix(G, n - 1, p) @ c) % p
    assert H.is_cocycle(z) and H.is_cocycle(dc)
    got = H.classify(((z + dc) % p)[None, :])[0]
    assert np.array_equal(got, coeff % p)


@given(st.sampled_from([("V4", 2), ("D8", 2), ("Q8", 2), ("C3:C4", 3)]),
       st.integers(1, 2), st.data())
def test_induced_maps_are_functorial(case, n, data):
    name, p = case
    G = library.named_group(name)
    auts = gr.automorphisms(G)
    f = data.draw(st.sampled_from(auts))
    g = data.draw(st.sampled_from(auts))
    H = co.bar_cohomology(G, p, n)
    Mf = co.induced_map(f, H, H)
    Mg = co.induced_map(g, H, H)
    Mgf = co.induced_map(g @ f, H, H)
    assert np.array_equal(Mgf, (Mf @ Mg) % p)
    ident = co.induced_map(gr.identity_hom(G.whole), H, H)
    assert np.array_equal(ident, np.eye(H.dimension, dtype=np.int64))


def test_inner_automorphisms_act_trivially():
    G = library.named_group("D8")
    H = co.bar_cohomology(G, 2, 2)
    for g in range(G.order):
        c = gr.conjugation_hom(g, G.whole)
        assert np.array_equal(co.induced_map(c, H, H), np.eye(H.dimension, dtype=np.int64))


@pytest.mark.parametrize("name,p", [("A4", 2), ("S4", 2), ("S3", 3), ("C3:C4", 3)])
def test_stable_elements_equal_group_cohomology(name, p):
    G = library.named_group(name)
    F = fu.fusion_of_group(G, p)
    for n in range(4):
        st_ = co.stable_elements(F, n)
        assert st_.dimension == co.bar_cohomology(G, p, n).dimension
        assert st_.agrees_with_centric


def test_stable_elements_of_inner_system_is_everything():
    F = fu.inner_fusion(library.named_group("D8"), 2)
    assert co.stable_dimensions(F, 3) == [1, 2, 3, 4]


def test_mv_free_product():
    C2, C1 = library.cyclic(2), library.cyclic(1)
    M = mo.two_vertex_model(C2, C2, C1, [0], [0], 2)
    assert co.mv_dimensions(M, 2, 3) == [1, 2, 2, 2]
    r = co.restriction_analysis(M, fu.inner_fusion(C2, 2), 2, 1)
    assert (r.dim_HG, r.dim_image_res, r.dim_W) == (2, 1, 1)


def test_mv_degenerate_amalgam_is_s4():
    S4 = library.named_group("S4")
    M = mo.robinson_model(S4, 2)
    assert co.mv_dimensions(M, 2, 3) == co.cohomology_dimensions(S4, 2, 3)


@pytest.mark.parametrize("left,right", [("C2", "C2"), ("A4", "C2"), ("C3", "S3")])
def test_kunneth_rows(left, right):
    p = 3 if "S3" in right else 2
    F1 = fu.fusion_of_group(library.named_group(left), p)
    F2 = fu.fusion_of_group(library.named_group(right), p)
    rows = co.kunneth_check(F1, F2, 3)
    assert all(r.equal for r in rows)
