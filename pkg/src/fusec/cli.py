"""Command line interface: ``fusec``.

Exit status: 0 when every verdict is pass or evidence-only, 1 when a check
fails, 2 for malformed input or exhausted budgets.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import cohomology as co
from . import fusion as fu
from . import io
from . import lab
from . import models as mo
from .errors import FusecError, ModelError
from .lab import CheckReport


def _emit(rep: CheckReport, fmt: str) -> int:
    print(rep.to_json() if fmt == "structured" else rep.to_text())
    return 1 if rep.verdict == lab.FAIL else 0


def _elems(P) -> list[int]:
    return list(P.elements)


def _dump_dir(path: str | None) -> Path | None:
    if not path:
        return None
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _save(d: Path | None, name: str, **arrays) -> None:
    if d is not None:
        np.savez(d / f"{name}.npz", **{k: np.asarray(v) for k, v in arrays.items()})


# ---------------------------------------------------------------------------
# fusion and checks

def cmd_fusion(a) -> CheckReport:
    F, _ = io.load_fusion(a.fusion, a.budget)
    bad = fu.check_axioms(F)
    sat = fu.is_saturated(F)
    rep = CheckReport("fusion", "fusion system axioms (inverses, restriction, composition, "
                      "S-conjugation)", {"fusion": a.fusion, "p": F.p, "order_S": F.S.order},
                      lab.PASS if not bad else lab.FAIL)
    w = rep.witnesses
    w["subgroups"] = [_elems(P) for P in F.subgroups]
    w["count_matrix"] = F.count_matrix().tolist()
    w["isomorphisms"] = F.n_isos
    w["axiom_violations"] = bad[:5]
    w["saturated"] = bool(sat)
    if not sat:
        w["saturation_failure"] = {"axiom": sat.axiom, "detail": sat.detail,
                                   "subgroup": _elems(sat.subgroup) if sat.subgroup else None}
    w["centric"] = [_elems(P) for P in fu.centric_subgroups(F)]
    if a.verbose:
        w["maps"] = [{"domain": _elems(P), "images": list(phi)} for P, phi in F.morphisms()]
    return rep


def cmd_check_gt(a) -> CheckReport:
    F, _ = io.load_fusion(a.fusion, a.budget)
    rep = lab.check_gt_center(F)
    rep.inputs["fusion"] = a.fusion
    return rep


def cmd_check_thompson(a) -> CheckReport:
    F, _ = io.load_fusion(a.fusion, a.budget)
    rep = lab.check_thompson_triviality(F)
    rep.inputs["fusion"] = a.fusion
    return rep


def cmd_check_kunneth(a) -> CheckReport:
    F1, _ = io.load_fusion(a.left)
    F2, _ = io.load_fusion(a.right)
    rep = lab.run_kunneth_suite([(F1, F2)], a.degree, a.budget, names=[f"{a.left} x {a.right}"])
    rep.inputs.update({"left": a.left, "right": a.right})
    return rep


def cmd_suite(a) -> CheckReport:
    G = io.resolve_group(a.group)
    return lab.run_model_suite(G, a.prime, a.degree, a.budget, a.flavor, label=a.group)


# ---------------------------------------------------------------------------
# models

def _model_witness(M: mo.StarOfGroups) -> dict:
    return {"vertices": M.describe(),
            "vertex_orders": [L.order for L in M.vertices],
            "edge_orders": [e.group.order for e in M.edges],
            "order_S": M.S_group.order}


def cmd_model_robinson(a) -> CheckReport:
    G = io.resolve_group(a.group)
    rep = CheckReport("model-robinson", "iterated amalgam of linking automizers over "
                      "the chosen subgroup family", {"group": a.group, "p": a.prime,
                                                     "flavor": a.flavor})
    F = fu.fusion_of_group(G, a.prime)
    try:
        M = mo.robinson_model(G, a.prime, a.flavor, F)
    except ModelError as exc:
        rep.verdict = lab.FAIL
        rep.witnesses["error"] = str(exc)
        return rep
    rep.witnesses.update(_model_witness(M))
    rep.witnesses["family"] = [_elems(P) for P in M.base_points]
    rep.witnesses["conditions"] = {str(k + 1): v for k, v in M.conditions.items()}
    v = mo.verify_model(M, F)
    rep.witnesses["verify"] = v.describe()
    rep.verdict = lab.PASS if v else lab.FAIL
    if a.out:
        io.write_json(a.out, io.model_to_obj(M))
        rep.witnesses["written"] = a.out
    return rep


def cmd_model_refine(a) -> CheckReport:
    M = io.load_model(a.model)
    choices = io.load_choices(a.choices, M)
    rep = CheckReport("model-refine", "vertex groups replaced by generating families of "
                      "subgroups; fusion is unchanged",
                      {"model": a.model, "choices": a.choices, "fusion": a.fusion})
    try:
        R = mo.refine_model(M, choices)
    except ModelError as exc:
        rep.verdict = lab.FAIL
        rep.witnesses["error"] = str(exc)
        return rep
    rep.witnesses.update(_model_witness(R))
    F = io.load_fusion(a.fusion)[0] if a.fusion else mo.model_fusion(M)
    v = mo.verify_model(R, F)
    rep.witnesses["verify"] = v.describe()
    rep.witnesses["euler_chi"] = str(mo.euler_characteristic(R).chi)
    rep.verdict = lab.PASS if v else lab.FAIL
    if a.out:
        io.write_json(a.out, io.model_to_obj(R))
        rep.witnesses["written"] = a.out
    return rep


def cmd_model_verify(a) -> CheckReport:
    M = io.load_model(a.model)
    F, _ = io.load_fusion(a.fusion)
    v = mo.verify_model(M, F)
    rep = CheckReport("model-verify", "fusion generated by the vertices equals F",
                      {"model": a.model, "fusion": a.fusion}, lab.PASS if v else lab.FAIL)
    rep.witnesses.update(_model_witness(M))
    rep.witnesses["verify"] = v.describe()
    return rep


def cmd_model_euler(a) -> CheckReport:
    M = io.load_model(a.model)
    e = mo.euler_characteristic(M)
    rep = CheckReport("model-euler", "χ = Σ 1/|K_i| − Σ 1/|E_j|; d = χ·|S|·lcm of indices "
                      "is an integer", {"model": a.model},
                      lab.PASS if e.integral else lab.FAIL,
                      conventions=["the sign of d is reported, not asserted"])
    rep.witnesses.update(_model_witness(M))
    rep.witnesses.update({"chi": str(e.chi), "d": e.d, "d_sign": e.sign, "d_negative": e.d < 0,
                          "lcm_index": e.lcm_index, "integral": e.integral})
    return rep


def cmd_model_permrep(a) -> CheckReport:
    M = io.load_model(a.model)
    H = io.load_subgroups(a.subgroups, M) if a.subgroups else None
    rep = CheckReport("model-permrep", "coset actions glue to a permutation representation "
                      "with S acting freely and no bounded torsion in the kernel",
                      {"model": a.model, "subgroups": a.subgroups},
                      conventions=["kernel freeness is evidence only (bounded torsion checks)"])
    r = mo.free_kernel_perm_rep(M, H, a.perm_budget)
    c = mo.check_perm_rep(r)
    _, lin = mo.linearize(r, M.p)
    lin_ok = lin.vertex_ok and lin.S_free and lin.S_free_rank * M.S_group.order == lin.dimension
    rep.witnesses.update({
        "degree": c.degree, "complements": [_elems(K) for K in r.complements],
        "edge_compatible": c.edge_compatible, "S_free": c.S_free,
        "vertices_faithful": c.faithful_on_vertices,
        "no_bounded_torsion": c.conjugates_nontrivial,
        "kernel_index": c.kernel_index,
        "kernel_index_divisible_by_vertex_orders": c.index_divisible_by_vertex_orders,
        "module_dimension": lin.dimension, "module_S_free_rank": lin.S_free_rank,
        "module_vertex_summands": [list(s) for s in lin.vertex_summands],
    })
    if a.verbose:
        rep.witnesses["images"] = [[list(q) for q in imgs] for imgs in r.images]
    rep.verdict = lab.PASS if c.ok and lin_ok else lab.FAIL
    return rep


def cmd_model_present(a) -> CheckReport:
    F, gens = io.load_fusion(a.fusion)
    if gens is None:
        gens = fu.generators_of(F)
    build = (mo.leary_stancu_presentation if a.style == "leary-stancu"
             else mo.finite_order_presentation)
    H = build(gens)
    ab = mo.abelianization(H, F.p)
    rep = CheckReport("model-present", "HNN-style presentation realizing the generated "
                      "fusion system", {"fusion": a.fusion, "style": a.style})
    rep.witnesses.update({
        "generators": H.generators,
        "relators": [H.format_word(r) for r in H.relators],
        "presentation": H.format(),
        "abelianization": ab.describe(),
        "H1_dimension": ab.h1_dimension,
        "stable_letters": len(H.letters),
    })
    return rep


# ---------------------------------------------------------------------------
# cohomology

def _rows(dims: list[int]) -> list[dict]:
    return [{"degree": n, "dimension": d} for n, d in enumerate(dims)]


def cmd_cohom_dims(a) -> CheckReport:
    G = io.resolve_group(a.group)
    d = _dump_dir(a.dump_matrices)
    dims = []
    for n in range(a.degree + 1):
        h = co.bar_cohomology(G, a.prime, n, a.budget)
        dims.append(h.dimension)
        if d is not None:
            D = co.coboundary_matrix(G, n, a.prime).tocoo()
            _save(d, f"bar_H{n}", coboundary_rows=D.row, coboundary_cols=D.col,
                  coboundary_data=D.data, coboundary_shape=D.shape,
                  boundaries=h.coboundary_basis, representatives=h.representatives)
    rep = CheckReport("cohom-dims", "dim H^n(G; GF(p)) from normalized bar cochains",
                      {"group": a.group, "p": a.prime, "degree": a.degree, "budget": a.budget})
    rep.witnesses["table"] = _rows(dims)
    rep.witnesses["dd_zero"] = all(co.check_dd(G, n, a.prime) for n in range(a.degree))
    rep.verdict = lab.PASS if rep.witnesses["dd_zero"] else lab.FAIL
    return rep


def cmd_cohom_stable(a) -> CheckReport:
    F, _ = io.load_fusion(a.fusion)
    d = _dump_dir(a.dump_matrices)
    table, ok = [], True
    for n in range(a.degree + 1):
        st = co.stable_elements(F, n, a.budget)
        ok = ok and bool(st.agrees_with_centric)
        table.append({"degree": n, "dimension": st.dimension, "H_S": st.ambient_dimension,
                      "centric_only": st.centric_dimension})
        _save(d, f"stable_H{n}", basis=st.basis)
    rep = CheckReport("cohom-stable", "stable elements of H^*(S) under F; restricting to "
                      "centric subgroups gives the same subspace",
                      {"fusion": a.fusion, "p": F.p, "degree": a.degree, "budget": a.budget},
                      lab.PASS if ok else lab.FAIL)
    rep.witnesses["table"] = table
    return rep


def cmd_cohom_mv(a) -> CheckReport:
    M = io.load_model(a.model)
    d = _dump_dir(a.dump_matrices)
    dims = co.mv_dimensions(M, M.p, a.degree, a.budget)
    if d is not None:
        for n in range(a.degree + 1):
            _save(d, f"mv_alpha{n}", alpha=co._alpha(M, M.p, n, a.budget).alpha)
    rep = CheckReport("cohom-mv", "dim H^n of the tree of groups from the Mayer-Vietoris "
                      "sequence", {"model": a.model, "p": M.p, "degree": a.degree,
                                   "budget": a.budget})
    rep.witnesses["table"] = _rows(dims)
    return rep


def cmd_cohom_restriction(a) -> CheckReport:
    M = io.load_model(a.model)
    F, _ = io.load_fusion(a.fusion)
    rows, ok = [], True
    for n in range(a.degree + 1):
        r = co.restriction_analysis(M, F, M.p, n, a.budget)
        good = r.image_inside_stable and r.dim_image_res + r.dim_W == r.dim_HG
        ok = ok and good
        rows.append({"degree": n, "H_model": r.dim_HG, "image": r.dim_image_res,
                     "W": r.dim_W, "stable": r.dim_stable,
                     "image_inside_stable": r.image_inside_stable})
    rep = CheckReport("cohom-restriction", "restriction from the amalgam to S lands in the "
                      "stable elements; W is its kernel",
                      {"model": a.model, "fusion": a.fusion, "degree": a.degree},
                      lab.PASS if ok else lab.FAIL)
    rep.witnesses["table"] = rows
    return rep


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="fusec", description="Fusion systems, group models "
                                  "and their cohomology at small scale.")
    top.add_argument("--format", choices=("text", "structured"), default="text")
    sub = top.add_subparsers(dest="command", required=True)

    def budget(p, default=co.DEFAULT_COCHAIN_BUDGET):
        p.add_argument("--budget", type=int, default=default)

    def degree(p):
        p.add_argument("--degree", type=int, default=co.DEFAULT_MAX_DEGREE)

    p = sub.add_parser("fusion", help="dump a fusion system")
    p.add_argument("--fusion", required=True)
    p.add_argument("--verbose", action="store_true", help="list every map")
    budget(p, fu.DEFAULT_MORPHISM_BUDGET)
    p.set_defaults(func=cmd_fusion)

    chk = sub.add_parser("check", help="theorem checks").add_subparsers(dest="which", required=True)
    for name, fn in (("gt", cmd_check_gt), ("thompson", cmd_check_thompson)):
        p = chk.add_parser(name)
        p.add_argument("--fusion", required=True)
        budget(p, fu.DEFAULT_MORPHISM_BUDGET)
        p.set_defaults(func=fn)
    p = chk.add_parser("kunneth")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    degree(p)
    budget(p)
    p.set_defaults(func=cmd_check_kunneth)

    p = sub.add_parser("suite", help="end-to-end model suite for a group")
    p.add_argument("--group", required=True, help="group file or library name")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--flavor", choices=mo.FLAVORS, default="centric-radical")
    degree(p)
    budget(p)
    p.set_defaults(func=cmd_suite)

    mod = sub.add_parser("model", help="group models").add_subparsers(dest="which", required=True)
    p = mod.add_parser("robinson")
    p.add_argument("--group", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--flavor", choices=mo.FLAVORS, default="centric-radical")
    p.add_argument("--out", help="write the model file here")
    p.set_defaults(func=cmd_model_robinson)
    p = mod.add_parser("refine")
    p.add_argument("--model", required=True)
    p.add_argument("--choices", required=True)
    p.add_argument("--fusion", help="fusion system to verify against (default: the model's own)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_model_refine)
    p = mod.add_parser("verify")
    p.add_argument("--model", required=True)
    p.add_argument("--fusion", required=True)
    p.set_defaults(func=cmd_model_verify)
    p = mod.add_parser("euler")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_model_euler)
    p = mod.add_parser("permrep")
    p.add_argument("--model", required=True)
    p.add_argument("--subgroups")
    p.add_argument("--perm-budget", type=int, default=mo.DEFAULT_PERM_BUDGET)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_model_permrep)
    p = mod.add_parser("present")
    p.add_argument("--fusion", required=True)
    p.add_argument("--style", choices=("leary-stancu", "finite-order"), default="leary-stancu")
    p.set_defaults(func=cmd_model_present)

    coh = sub.add_parser("cohom", help="mod p cohomology").add_subparsers(dest="which", required=True)
    for name, fn, need in (("dims", cmd_cohom_dims, ("group",)),
                           ("stable", cmd_cohom_stable, ("fusion",)),
                           ("mv", cmd_cohom_mv, ("model",)),
                           ("restriction", cmd_cohom_restriction, ("model", "fusion"))):
        p = coh.add_parser(name)
        for arg in need:
            p.add_argument(f"--{arg}", required=True)
        if name == "dims":
            p.add_argument("--prime", type=int, required=True)
        degree(p)
        budget(p)
        if name != "restriction":
            p.add_argument("--dump-matrices", metavar="DIR")
        p.set_defaults(func=fn)
    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except FusecError as exc:
        print(f"fusec: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fusec: error: {exc}", file=sys.stderr)
        return 2
    return _emit(rep, args.format)


if __name__ == "__main__":
    sys.exit(main())
