"""JSON documents for scalars, group elements, points, modules and reports.

Every document carries a ``"field"`` header ``{"p": p, "d": d}``; scalars are
strings in the format of ``Scalar.to_str`` where ``r`` stands for ``sqrt(d)``.
Group elements are written as follows:

* ``GL``/``SL``: ``{"matrix": [[...], ...]}``;
* ``calG``: ``{"g": [[...], ...], "a": "...", "eps": 0 or 1}``;
* products: ``{"factors": [element, ...]}``.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Sequence

from .groups import CalG, GroupElement, GroupError, GroupModel, ProductGroup, catalog
from .linalg import Mat
from .phimod import GaloisGroup, PhiModule
from .scalars import Scalar
from .wdrep import FiniteGroup, InertialData, WDPoint, trivial_inertia

__all__ = [
    "DocumentError",
    "dumps",
    "field_tag",
    "scalar_to_doc",
    "scalar_from_doc",
    "matrix_to_doc",
    "matrix_from_doc",
    "element_to_doc",
    "element_from_doc",
    "point_to_doc",
    "point_from_doc",
    "module_to_doc",
    "module_from_doc",
]


class DocumentError(ValueError):
    """A malformed input document."""


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def field_tag(scalars: Iterable[Scalar]) -> int:
    """The common ``d`` of a collection of scalars (1 when all are rational)."""
    tag = 1
    for s in scalars:
        if s.d != 1:
            if tag not in (1, s.d):
                raise DocumentError("scalars from two different quadratic fields")
            tag = s.d
    return tag


def scalar_to_doc(x: Scalar) -> str:
    return x.to_str()


def scalar_from_doc(text: Any, d: int = 1) -> Scalar:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(f"scalars must be strings, got {text!r}")
    try:
        return Scalar.parse(str(text), d)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(str(exc)) from exc


def matrix_to_doc(M: Mat) -> list[list[str]]:
    return [[scalar_to_doc(x) for x in M.row(i)] for i in range(M.rows)]


def matrix_from_doc(rows: Any, d: int = 1) -> Mat:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise DocumentError("a matrix must be a non-empty list of rows")
    if len({len(r) for r in rows}) != 1:
        raise DocumentError("matrix rows have different lengths")
    return Mat.from_rows([[scalar_from_doc(x, d) for x in r] for r in rows])


def element_to_doc(G: GroupModel, x: GroupElement) -> dict:
    if isinstance(G, ProductGroup):
        return {"factors": [element_to_doc(f, e) for f, e in zip(G.factors, x.aux)]}
    if isinstance(G, CalG):
        g, a, eps = G.parts(x)
        return {"g": matrix_to_doc(g), "a": scalar_to_doc(a), "eps": eps}
    return {"matrix": matrix_to_doc(x.matrix)}


def element_from_doc(G: GroupModel, doc: Any, d: int = 1) -> GroupElement:
    try:
        if isinstance(G, ProductGroup):
            parts = doc["factors"]
            if len(parts) != len(G.factors):
                raise DocumentError(f"{G.name} needs {len(G.factors)} factor elements")
            x = G.combine([element_from_doc(f, e, d) for f, e in zip(G.factors, parts)])
        elif isinstance(G, CalG):
            x = G.make(matrix_from_doc(doc["g"], d), scalar_from_doc(doc["a"], d), int(doc.get("eps", 0)))
        else:
            rows = doc["matrix"] if isinstance(doc, dict) else doc
            x = GroupElement(matrix_from_doc(rows, d))
        G.check_member(x)
        return x
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed {G.name} element: {exc}") from exc
    except GroupError as exc:
        raise DocumentError(str(exc)) from exc


def _vector_from_doc(v: Any, n: int, d: int) -> tuple[Scalar, ...]:
    if not isinstance(v, list) or len(v) != n:
        raise DocumentError(f"expected a vector of {n} scalars")
    return tuple(scalar_from_doc(x, d) for x in v)


def _field(doc: dict) -> tuple[int | None, int]:
    f = doc.get("field", {})
    if not isinstance(f, dict):
        raise DocumentError("field header must be an object")
    d = f.get("d", 1)
    if not isinstance(d, int) or d < 1:
        raise DocumentError("field header d must be a positive integer")
    return f.get("p"), d


def _group(doc: dict) -> GroupModel:
    if "group" not in doc:
        raise DocumentError("document has no group")
    try:
        return catalog(doc["group"])
    except GroupError as exc:
        raise DocumentError(str(exc)) from exc


def _inertia_frame_to_doc(group: FiniteGroup, theta: Sequence[int], d: int, u: int) -> dict:
    return {"table": [list(r) for r in group.table], "identity": group.identity,
            "theta": list(theta), "d": d, "frob_power": None if u == group.identity else u}


def _inertia_frame_from_doc(doc: dict) -> tuple[FiniteGroup, tuple[int, ...], int, int | None]:
    try:
        table = tuple(tuple(int(x) for x in row) for row in doc["table"])
        group = FiniteGroup(table, int(doc.get("identity", 0)))
        n = group.order
        theta = tuple(int(x) for x in doc.get("theta", range(n)))
        d = int(doc.get("d", 1))
        u = doc.get("frob_power")
        return group, theta, d, None if u is None else int(u)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed inertia data: {exc}") from exc


def point_to_doc(x: WDPoint) -> dict:
    G = x.G
    scal = list(x.N) + list(x.Phi.matrix.entries) + [s for t in x.inertia.tau for s in t.matrix.entries]
    inert = x.inertia
    idoc = _inertia_frame_to_doc(inert.group, inert.theta, inert.d, inert.u)
    idoc["tau"] = [element_to_doc(G, t) for t in inert.tau]
    return {
        "field": {"p": x.p, "d": field_tag(scal)},
        "p": x.p,
        "fK": x.fK,
        "group": G.element_spec(),
        "Phi": element_to_doc(G, x.Phi),
        "N": [scalar_to_doc(c) for c in x.N],
        "inertia": idoc,
    }


def point_from_doc(doc: Any) -> WDPoint:
    if not isinstance(doc, dict):
        raise DocumentError("a point document must be a JSON object")
    fp, d = _field(doc)
    G = _group(doc)
    try:
        p = int(doc.get("p", fp))
        fK = int(doc.get("fK", 1))
    except (TypeError, ValueError) as exc:
        raise DocumentError("p and fK must be integers") from exc
    if fp is not None and fp != p:
        raise DocumentError("field header p differs from the point's p")
    if fK < 1 or p < 2:
        raise DocumentError("need p >= 2 and fK >= 1")
    if "Phi" not in doc:
        raise DocumentError("point has no Phi")
    Phi = element_from_doc(G, doc["Phi"], d)
    N = _vector_from_doc(doc.get("N", ["0"] * G.group_dim), G.group_dim, d)
    idoc = doc.get("inertia")
    if idoc is None:
        inertia = trivial_inertia(G)
    else:
        group, theta, dd, u = _inertia_frame_from_doc(idoc)
        taus = idoc.get("tau")
        if not isinstance(taus, list):
            raise DocumentError("inertia needs a tau list")
        tau = tuple(element_from_doc(G, t, d) for t in taus)
        inertia = InertialData(group, tau, theta, dd, u)
    return WDPoint(G, p, fK, Phi, N, inertia)


def module_to_doc(M: PhiModule) -> dict:
    G, gal = M.G, M.galois
    scal = [s for x in M.Phis for s in x.matrix.entries] + [c for n in M.Ns for c in n]
    scal += [s for ts in M.taus for t in ts for s in t.matrix.entries]
    return {
        "field": {"p": M.p, "d": field_tag(scal)},
        "p": M.p,
        "fK": M.fK,
        "group": G.element_spec(),
        "Phis": [element_to_doc(G, x) for x in M.Phis],
        "Ns": [[scalar_to_doc(c) for c in n] for n in M.Ns],
        "galois": _inertia_frame_to_doc(gal.inertia, gal.theta, gal.d, gal.u),
        "taus": [[element_to_doc(G, t) for t in ts] for ts in M.taus],
    }


def module_from_doc(doc: Any) -> PhiModule:
    if not isinstance(doc, dict):
        raise DocumentError("a module document must be a JSON object")
    _, d = _field(doc)
    G = _group(doc)
    try:
        p, fK = int(doc["p"]), int(doc.get("fK", 1))
        Phis = tuple(element_from_doc(G, x, d) for x in doc["Phis"])
        Ns = tuple(_vector_from_doc(n, G.group_dim, d) for n in doc["Ns"])
        group, theta, dd, u = _inertia_frame_from_doc(doc["galois"])
        gal = GaloisGroup(group, theta, dd, group.identity if u is None else u)
        taus = tuple(tuple(element_from_doc(G, t, d) for t in ts) for ts in doc["taus"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed module document: {exc}") from exc
    return PhiModule(G, p, fK, Phis, Ns, gal, taus)
