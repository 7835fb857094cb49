import json

import pytest

from fusec import fusion as fu
from fusec import groups as gr
from fusec import lab
from fusec import library
from fusec.errors import NotSaturated


def F_of(name, p):
    return fu.fusion_of_group(library.named_group(name), p)


@pytest.mark.parametrize("name,p", [("C9", 3), ("C7:C3", 7), ("S3xC3", 3), ("C3^2:C2", 3)])
def test_gt_center_odd(name, p):
    rep = lab.check_gt_center(F_of(name, p))
    assert rep.verdict == lab.PASS
    assert rep.witnesses["containment"] and rep.witnesses["centers_equal"]


def test_gt_center_even_is_evidence():
    rep = lab.check_gt_center(F_of("S4", 2))
    assert rep.verdict == lab.EVIDENCE
    assert rep.witnesses["clauses"]["containment"] == lab.PASS
    assert len(rep.witnesses["Z_F"]) == 1


def test_thompson_cyclic_and_dicyclic():
    rep = lab.check_thompson_triviality(F_of("C9", 3))
    assert rep.verdict == lab.PASS and rep.witnesses["hypotheses_hold"] and rep.witnesses["F_is_inner"]
    rep = lab.check_thompson_triviality(F_of("C3:C4", 3))
    assert rep.verdict == lab.PASS and not rep.witnesses["hypotheses_hold"]
    assert rep.witnesses["hypothesis_failing"] == "N_F(J(S))"


def test_unsaturated_input_is_refused():
    V = library.klein()
    swap = [f for f in gr.automorphisms(V) if f.images == (0, 2, 1, 3)]
    F = fu.generate_fusion(fu.FusionGenerators(V.whole, 2, swap))
    with pytest.raises(NotSaturated):
        lab.check_gt_center(F)
    with pytest.raises(NotSaturated):
        lab.check_thompson_triviality(F)


def test_model_suite_a4():
    rep = lab.run_model_suite(library.named_group("A4"), 2)
    assert rep.verdict == lab.PASS
    stages = {s["stage"]: s for s in rep.stages}
    assert stages["euler_characteristic"]["chi"] == "1/12"
    assert stages["euler_characteristic"]["d_sign"] == 1
    assert stages["cohomology"]["stable_dims"] == [1, 0, 1, 2]


def test_model_suite_small_degree():
    rep = lab.run_model_suite(library.named_group("C3"), 3, n_max=1)
    assert rep.verdict == lab.PASS
    assert rep.stages[-1]["degrees"] == 1


def test_kunneth_suite_degrades_degree_under_budget():
    A4 = F_of("A4", 2)
    C2 = fu.inner_fusion(library.cyclic(2), 2)
    rep = lab.run_kunneth_suite([(A4, C2)], 3, budget=300)  # 7^3 > 300
    st = rep.stages[0]
    assert st["status"] == lab.PASS and st["degrees"] == 2


def test_model_suite_stops_at_failing_stage(monkeypatch):
    from fusec import models as mo
    from fusec.errors import ModelError

    def boom(*a, **k):
        raise ModelError("Alperin condition failed at vertex 2: C_L(P) = Z(P)")
    monkeypatch.setattr(mo, "robinson_model", boom)
    rep = lab.run_model_suite(library.named_group("S4"), 2)
    assert rep.verdict == lab.FAIL
    assert rep.stages[2]["status"] == lab.FAIL and "Alperin" in rep.stages[2]["error"]
    assert rep.stages[-1]["status"] == "skipped"


def test_report_json_is_deterministic():
    a = lab.check_gt_center(F_of("S4", 2)).to_json()
    b = lab.check_gt_center(F_of("S4", 2)).to_json()
    assert a == b
    obj = json.loads(a)
    assert obj["verdict"] == "evidence-only"
    assert "containment" in lab.check_gt_center(F_of("S4", 2)).to_text()
