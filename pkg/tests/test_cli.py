import json
import subprocess
import sys

import pytest

from fusec import io
from fusec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def w(name, obj):
        (tmp_path / name).write_text(json.dumps(obj))
        return str(tmp_path / name)

    return {
        "dir": tmp_path,
        "s4": w("s4.json", {"degree": 4, "generators": [[1, 2, 3, 0], [1, 0, 2, 3]]}),
        "fs4": w("fs4.json", {"group": "s4.json", "prime": 2}),
        "c9": w("c9.json", {"group": "C9", "prime": 3}),
        "c2": w("c2.json", {"group": "C2", "prime": 2}),
        "a4": w("a4.json", {"group": {"name": "A4"}, "prime": 2}),
        "v4": w("v4.json", {"group": "V4", "prime": 2,
                            "maps": [{"domain": [1, 2], "images": [2, 3]}]}),
        "bad": w("bad.json", {"group": "V4", "prime": 2,
                              "maps": [{"domain": [1, 2], "images": [1, 1]}]}),
    }


def test_check_gt_and_thompson(capsys, files):
    code, out, _ = run(capsys, "check", "gt", "--fusion", files["fs4"])
    assert code == 0 and "EVIDENCE-ONLY" in out
    code, out, _ = run(capsys, "--format", "structured", "check", "thompson", "--fusion", files["c9"])
    assert code == 0 and json.loads(out)["witnesses"]["hypotheses_hold"] is True


def test_check_kunneth(capsys, files):
    code, out, _ = run(capsys, "--format", "structured", "check", "kunneth",
                       "--left", files["a4"], "--right", files["c2"], "--degree", "3")
    rep = json.loads(out)
    assert code == 0 and rep["stages"][0]["product_dims"] == [1, 1, 2, 4]


def test_suite(capsys):
    code, out, _ = run(capsys, "suite", "--group", "A4", "--prime", "2")
    assert code == 0 and "[pass] cohomology" in out


def test_model_pipeline(capsys, files):
    d = files["dir"]
    m = str(d / "m.json")
    code, out, _ = run(capsys, "model", "robinson", "--group", files["s4"], "--prime", "2",
                       "--out", m)
    assert code == 0
    code, out, _ = run(capsys, "--format", "structured", "model", "euler", "--model", m)
    rep = json.loads(out)
    assert code == 0 and rep["witnesses"]["chi"] == "1/24" and rep["witnesses"]["d"] == 1
    code, out, _ = run(capsys, "model", "permrep", "--model", m)
    assert code == 0 and "S_free: True" in out
    # split vertex 2 into the edge image and the whole vertex group
    model = io.load_model(m)
    e = model.edges[0]
    ch = d / "ch.json"
    ch.write_text(json.dumps({"choices": {"2": [{"elements": list(e.vertex_image.elements)},
                                                {"elements": list(range(24))}]}}))
    r = str(d / "r.json")
    code, out, _ = run(capsys, "model", "refine", "--model", m, "--choices", str(ch),
                       "--fusion", files["fs4"], "--out", r)
    assert code == 0 and "hom-sets agree" in out
    assert [L.order for L in io.load_model(r).vertices] == [8, 8, 24]
    code, out, _ = run(capsys, "model", "verify", "--model", r, "--fusion", files["fs4"])
    assert code == 0
    code, out, _ = run(capsys, "--format", "structured", "cohom", "restriction", "--model", m,
                       "--fusion", files["fs4"], "--degree", "2")
    assert code == 0 and [row["W"] for row in json.loads(out)["witnesses"]["table"]] == [0, 0, 0]
    code, out, _ = run(capsys, "cohom", "mv", "--model", m, "--degree", "3")
    assert code == 0 and "'dimension': 3" in out


def test_refine_failure_exit_code(capsys, files):
    d = files["dir"]
    m = str(d / "m.json")
    run(capsys, "model", "robinson", "--group", "S4", "--prime", "2", "--out", m)
    ch = d / "ch.json"
    A4 = [0]  # the trivial group does not contain the glued subgroup
    ch.write_text(json.dumps({"choices": {"2": [A4]}}))
    code, out, _ = run(capsys, "model", "refine", "--model", m, "--choices", str(ch))
    assert code == 1 and "FAIL" in out


def test_present(capsys, files):
    code, out, _ = run(capsys, "model", "present", "--fusion", files["v4"],
                       "--style", "finite-order")
    assert code == 0 and "abelianization: Z/3" in out
    code, out, _ = run(capsys, "model", "present", "--fusion", files["v4"])
    assert code == 0 and "abelianization: Z" in out


def test_fusion_dump(capsys, files):
    code, out, _ = run(capsys, "--format", "structured", "fusion", "--fusion", files["v4"],
                       "--verbose")
    rep = json.loads(out)
    assert code == 0 and rep["witnesses"]["count_matrix"][-1][-1] == 3
    assert len(rep["witnesses"]["maps"]) == rep["witnesses"]["isomorphisms"]


def test_cohom_dims_and_dump(capsys, files):
    d = files["dir"] / "mats"
    code, out, _ = run(capsys, "--format", "structured", "cohom", "dims", "--group", "S4",
                       "--prime", "2", "--dump-matrices", str(d))
    assert code == 0
    assert [r["dimension"] for r in json.loads(out)["witnesses"]["table"]] == [1, 1, 2, 3]
    assert sorted(p.name for p in d.iterdir()) == [f"bar_H{n}.npz" for n in range(4)]
    code, out, _ = run(capsys, "cohom", "stable", "--fusion", files["fs4"], "--degree", "2",
                       "--dump-matrices", str(d))
    assert code == 0


def test_input_errors(capsys, files):
    assert run(capsys, "check", "gt", "--fusion", "missing.json")[0] == 2
    assert run(capsys, "fusion", "--fusion", files["bad"])[0] == 2
    code, _, err = run(capsys, "cohom", "dims", "--group", "S4", "--prime", "2", "--degree", "5")
    assert code == 2 and "budget" in err
    assert run(capsys, "check", "kunneth", "--left", files["c9"], "--right", files["c2"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["model", "present", "--fusion", files["v4"], "--style", "other"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["check", "gt", "--fusion", "{fs4}"],
    ["suite", "--group", "S4", "--prime", "2"],
    ["model", "permrep", "--model", "{m}"],
])
def test_structured_output_is_byte_identical(capsys, files, argv):
    m = str(files["dir"] / "m.json")
    run(capsys, "model", "robinson", "--group", "S4", "--prime", "2", "--out", m)
    argv = [a.format(m=m, **{k: v for k, v in files.items() if k != "dir"}) for a in argv]
    first = run(capsys, "--format", "structured", *argv)[1]
    second = run(capsys, "--format", "structured", *argv)[1]
    assert first == second and first.endswith("}\n")


def test_console_script(files):
    out = subprocess.run([sys.executable, "-m", "fusec.cli", "--format", "structured",
                          "check", "thompson", "--fusion", files["c9"]],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["verdict"] == "pass"
