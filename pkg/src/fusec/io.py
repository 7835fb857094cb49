"""Reading and writing group, fusion, model and subgroup files (JSON)."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import fusion as fu
from . import groups as gr
from . import library
from .errors import InputError
from .groups import FiniteGroup, GroupHom, Subgroup
from .models import Edge, StarOfGroups


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _int_list(x, what: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise InputError(f"{what} must be a list of integers")
    return list(x)


# ---------------------------------------------------------------------------
# groups

def group_from_obj(obj: Any, base: Path | None = None) -> FiniteGroup:
    """A group from a file object, a library name, or a path to a group file."""
    if isinstance(obj, str):
        cand = (base / obj) if base is not None else Path(obj)
        if obj.endswith(".json") or cand.is_file():
            return load_group(cand)
        return library.named_group(obj)
    if not isinstance(obj, dict):
        raise InputError("group must be an object, a library name or a file path")
    labels = obj.get("labels")
    name = obj.get("name", "")
    if "cayley" in obj:
        table = obj["cayley"]
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise InputError("cayley must be a list of rows")
        return gr.from_cayley(table, labels, name=name)
    if "generators" in obj:
        if "degree" not in obj:
            raise InputError("permutation group needs a degree")
        gens = obj["generators"]
        if not isinstance(gens, list):
            raise InputError("generators must be a list of permutations")
        G = gr.from_permutation_generators(int(obj["degree"]), gens, name=name)
        if labels:
            if len(labels) != G.order:
                raise InputError("labels must name every element")
            G = FiniteGroup(G.table, G.inverse, tuple(labels), G.origin, name)
        return G
    if "name" in obj:
        return library.named_group(obj["name"])
    raise InputError("group file needs 'cayley', 'degree'+'generators' or 'name'")


def load_group(path: str | Path) -> FiniteGroup:
    path = Path(path)
    return group_from_obj(read_json(path), path.parent)


def group_to_obj(G: FiniteGroup) -> dict:
    out: dict[str, Any] = {"cayley": [list(r) for r in G.table]}
    if G.name:
        out["name"] = G.name
    if G.labels:
        out["labels"] = list(G.labels)
    return out


def resolve_group(ref: str) -> FiniteGroup:
    """CLI helper: a path to a group file, or a library name such as ``S4``."""
    if Path(ref).is_file():
        return load_group(ref)
    return library.named_group(ref)


# ---------------------------------------------------------------------------
# homomorphisms

def map_from_obj(obj: Any, src: FiniteGroup, dst: FiniteGroup, what: str) -> GroupHom:
    """A list of images of every element, or ``{"generators", "images"}``."""
    if isinstance(obj, dict):
        gens = _int_list(obj.get("generators"), f"{what} generators")
        imgs = _int_list(obj.get("images"), f"{what} images")
        if len(gens) != len(imgs):
            raise InputError(f"{what}: generators and images differ in length")
        _check_range(gens, src, what)
        _check_range(imgs, dst, what)
        m = gr.extend_hom(src, gens, imgs, dst)
        if m is None:
            raise InputError(f"{what}: generator images do not define a homomorphism")
        if len(m) != src.order:
            raise InputError(f"{what}: generators do not generate the source group")
        images = [m[x] for x in range(src.order)]
    else:
        images = _int_list(obj, what)
        if len(images) != src.order:
            raise InputError(f"{what}: expected {src.order} images")
        _check_range(images, dst, what)
    f = GroupHom(src.whole, dst.whole, images)
    if not f.is_homomorphism():
        raise InputError(f"{what}: not a homomorphism")
    return f


def _check_range(xs, G: FiniteGroup, what: str) -> None:
    if any(not 0 <= x < G.order for x in xs):
        raise InputError(f"{what}: element index out of range")


# ---------------------------------------------------------------------------
# fusion systems

def fusion_from_obj(obj: Any, base: Path | None = None,
                    budget: int = fu.DEFAULT_MORPHISM_BUDGET) -> tuple[fu.FusionSystem, fu.FusionGenerators | None]:
    """Without ``maps`` this is the fusion system of the group at ``prime``;
    with ``maps`` it is generated on S (the group itself or its Sylow subgroup).
    """
    if not isinstance(obj, dict) or "group" not in obj or "prime" not in obj:
        raise InputError("fusion file needs 'group' and 'prime'")
    G = group_from_obj(obj["group"], base)
    p = obj["prime"]
    if not isinstance(p, int) or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise InputError(f"prime must be a prime number, got {p!r}")
    if "maps" not in obj:
        return fu.fusion_of_group(G, p), None
    S = G.whole if G.is_p_group(p) else gr.sylow_p(G, p)
    maps = []
    if not isinstance(obj["maps"], list):
        raise InputError("maps must be a list")
    for k, m in enumerate(obj["maps"]):
        what = f"map {k + 1}"
        if not isinstance(m, dict):
            raise InputError(f"{what} must be an object")
        dom = _int_list(m.get("domain"), f"{what} domain")
        img = _int_list(m.get("images"), f"{what} images")
        if len(dom) != len(img):
            raise InputError(f"{what}: domain and images differ in length")
        _check_range(dom + img, G, what)
        ext = gr.extend_hom(G, dom, img, G)
        if ext is None:
            raise InputError(f"{what}: generator images do not define a homomorphism")
        P = gr.make_subgroup(G, ext)
        maps.append(GroupHom(P, S, [ext[x] for x in P.elements]))
    gens = fu.FusionGenerators(S, p, maps)
    return fu.generate_fusion(gens, budget), gens


def load_fusion(path: str | Path, budget: int = fu.DEFAULT_MORPHISM_BUDGET):
    path = Path(path)
    return fusion_from_obj(read_json(path), path.parent, budget)


# ---------------------------------------------------------------------------
# models

def model_from_obj(obj: Any, base: Path | None = None) -> StarOfGroups:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise InputError("model file needs 'vertices'")
    verts = [group_from_obj(v, base) for v in obj["vertices"]]
    if not verts:
        raise InputError("model needs at least one vertex")
    c = obj.get("sylow_vertex", 1)
    if not isinstance(c, int) or not 1 <= c <= len(verts):
        raise InputError("sylow_vertex must be a 1-based vertex number")
    c -= 1
    p = obj.get("prime")
    if not isinstance(p, int) or p < 2:
        raise InputError("model file needs a 'prime'")
    L = verts[c]
    if "sylow" in obj:
        S = gr.make_subgroup(L, _int_list(obj["sylow"], "sylow"))
    else:
        S = gr.sylow_p(L, p)
    Sg = S.as_group()
    sylow_map = GroupHom(Sg.whole, L.whole, S.elements)
    edges = []
    for k, e in enumerate(obj.get("edges", [])):
        what = f"edge {k + 1}"
        if not isinstance(e, dict) or not {"edge_group", "into_base", "into_vertex", "vertex"} <= set(e):
            raise InputError(f"{what} needs edge_group, into_base, into_vertex and vertex")
        v = e["vertex"]
        if not isinstance(v, int) or not 1 <= v <= len(verts):
            raise InputError(f"{what}: vertex must be a 1-based vertex number")
        E = group_from_obj(e["edge_group"], base)
        edges.append(Edge(E, map_from_obj(e["into_base"], E, L, f"{what} into_base"),
                          map_from_obj(e["into_vertex"], E, verts[v - 1], f"{what} into_vertex"),
                          v - 1, c))
    labels = obj.get("labels") or []
    return StarOfGroups(verts, edges, p, sylow_map, c, list(labels))


def load_model(path: str | Path) -> StarOfGroups:
    path = Path(path)
    return model_from_obj(read_json(path), path.parent)


def model_to_obj(model: StarOfGroups) -> dict:
    return {
        "prime": model.p,
        "sylow_vertex": model.sylow_vertex + 1,
        "sylow": list(model.S.elements),
        "labels": list(model.labels),
        "vertices": [group_to_obj(L) for L in model.vertices],
        "edges": [{"edge_group": group_to_obj(e.group),
                   "into_base": list(e.into_base.images),
                   "into_vertex": list(e.into_vertex.images),
                   "vertex": e.vertex + 1} for e in model.edges],
    }


# ---------------------------------------------------------------------------
# subgroup lists

def _subgroup(G: FiniteGroup, obj: Any, what: str) -> Subgroup:
    if isinstance(obj, dict):
        if "elements" in obj:
            return gr.make_subgroup(G, _int_list(obj["elements"], what))
        gens = _int_list(obj.get("generators"), what)
    else:
        gens = _int_list(obj, what)
    _check_range(gens, G, what)
    return gr.generate(G, gens)


def load_subgroups(path: str | Path, model: StarOfGroups) -> list[Subgroup]:
    """One subgroup per vertex: ``{"subgroups": [gens or {"elements": [...]}, ...]}``."""
    obj = read_json(path)
    subs = obj.get("subgroups") if isinstance(obj, dict) else obj
    if not isinstance(subs, list) or len(subs) != len(model.vertices):
        raise InputError("subgroups file must list one subgroup per vertex")
    return [_subgroup(L, s, f"subgroup {i + 1}") for i, (L, s) in enumerate(zip(model.vertices, subs))]


def load_choices(path: str | Path, model: StarOfGroups) -> dict[int, list[Subgroup]]:
    """``{"choices": {"<vertex>": [subgroup, ...]}}`` with 1-based vertex keys."""
    obj = read_json(path)
    ch = obj.get("choices") if isinstance(obj, dict) else None
    if not isinstance(ch, dict):
        raise InputError("choices file needs a 'choices' object")
    out = {}
    for key, subs in ch.items():
        try:
            v = int(key) - 1
        except ValueError:
            raise InputError(f"choice key {key!r} is not a vertex number") from None
        if not 0 <= v < len(model.vertices):
            raise InputError(f"choice for vertex {key} out of range")
        if not isinstance(subs, list):
            raise InputError(f"choice for vertex {key} must be a list")
        out[v] = [_subgroup(model.vertices[v], s, f"vertex {key} piece {j + 1}")
                  for j, s in enumerate(subs)]
    return out
