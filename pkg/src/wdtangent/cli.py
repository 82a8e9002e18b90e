"""Command line front end.

Exit codes: 0 on success, 1 when the input describes an invalid point or
module (the report lists the violated constraints), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from . import __version__
from .cohomology import (
    cohomology_dims,
    pairing_matrix,
    very_smooth_eigen_test,
    very_smooth_power_test,
)
from .groups import CalG, GroupError, GroupModel, ProductGroup, catalog, make_cocharacter, morphism
from .linalg import Mat
from .nilpotent import jacobson_morozov, jordan_nilpotent, partitions
from .phimod import (
    HodgeType,
    ModuleError,
    collapse,
    fontaine_to_wd,
    global_ledger,
    hodge_dim,
    is_regular,
    local_dim,
    validate_module,
    wd_to_phi_module,
)
from .serialize import (
    DocumentError,
    dumps,
    element_to_doc,
    matrix_to_doc,
    module_from_doc,
    module_to_doc,
    point_from_doc,
    point_to_doc,
    scalar_from_doc,
    scalar_to_doc,
)
from .smoothfactory import InconsistencyError, pushforward, smooth_point
from .wdrep import InvalidPointError, sample_fiber, trivial_inertia, trivialize_inertia, validate

__all__ = ["main", "build_parser", "sweep_rows", "SWEEP_HEADER"]

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED = 0, 1, 2


class CliInvalid(Exception):
    """Carries a report for exit code 1."""

    def __init__(self, report: dict) -> None:
        super().__init__(report.get("error", "invalid"))
        self.report = report


# ---------------------------------------------------------------------------
# argument helpers


def _load(args: argparse.Namespace) -> Any:
    if args.input is None:
        raise DocumentError("--input is required for this command")
    try:
        if args.input == "-":
            return json.load(sys.stdin)
        if args.input.lstrip().startswith("{"):
            return json.loads(args.input)
        with open(args.input, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"input is not valid JSON: {exc}") from exc


def _emit(args: argparse.Namespace, doc: Any) -> None:
    text = dumps(doc) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _group_arg(text: str | None) -> GroupModel:
    if not text:
        raise DocumentError("--group is required")
    try:
        return catalog(text)
    except GroupError as exc:
        raise DocumentError(str(exc)) from exc


def _partition_block(G: GroupModel) -> int | None:
    """Size of the ``gl_n`` block carrying Jordan types, if there is one."""
    if isinstance(G, CalG):
        return G.n
    if isinstance(G, ProductGroup):
        return None
    return G.std_dim


def nilpotent_arg(G: GroupModel, text: str | None) -> tuple:
    """Parse ``--nilpotent``: a Jordan type such as ``2,1`` or ``coords:1,0,0``."""
    if text is None or text.strip() in ("", "0"):
        return tuple(scalar_from_doc("0") for _ in range(G.group_dim))
    text = text.strip()
    if text.startswith("coords:"):
        vals = [v for v in text[len("coords:"):].split(",") if v.strip()]
        if len(vals) != G.group_dim:
            raise DocumentError(f"{G.name} needs {G.group_dim} Lie coordinates")
        return tuple(scalar_from_doc(v.strip()) for v in vals)
    parts = [int(v) for v in re.findall(r"\d+", text)]
    n = _partition_block(G)
    if n is None or sum(parts) != n or not parts or min(parts) < 1:
        raise DocumentError(f"{text!r} is not a Jordan type for {G.name}")
    if isinstance(G, CalG):
        return _calg_jordan(G, parts)
    return jordan_nilpotent(G, parts)


def _calg_jordan(G: CalG, parts: Sequence[int]) -> tuple:
    from .scalars import ONE, ZERO

    n = G.std_dim
    ents = [ZERO] * (n * n)
    off = 0
    for size in parts:
        for i in range(size - 1):
            ents[(off + i) * n + off + i + 1] = ONE
        off += size
    return G.lie_coords(Mat(n, n, ents))


def _report_doc(x) -> dict:
    rep = cohomology_dims(x)
    out = rep.as_dict()
    out["group"] = x.G.name
    out["group_dim"] = x.G.group_dim
    return out


def _require(x) -> None:
    rep = validate(x)
    if not rep.ok:
        raise CliInvalid({"valid": False, "violations": list(rep.violations)})


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args: argparse.Namespace) -> dict:
    x = point_from_doc(_load(args))
    rep = validate(x)
    if not rep.ok:
        raise CliInvalid({"valid": False, "violations": list(rep.violations)})
    out = {"valid": True, "violations": []}
    out.update(_report_doc(x))
    return out


def cmd_cohomology(args: argparse.Namespace) -> dict:
    x = point_from_doc(_load(args))
    _require(x)
    out = _report_doc(x)
    out["pairing_matrix"] = matrix_to_doc(pairing_matrix(x))
    return out


def cmd_very_smooth(args: argparse.Namespace) -> dict:
    x = point_from_doc(_load(args))
    _require(x)
    h2 = very_smooth_power_test(x)
    obstructed = very_smooth_eigen_test(x)
    if (h2 != 0) != obstructed:
        raise InconsistencyError("power test and eigenvalue test disagree")
    return {"M": trivialize_inertia(x).M, "power_test_h2": h2, "eigen_obstructed": obstructed,
            "very_smooth": h2 == 0}


def _certificate_doc(cert) -> dict:
    lam = cert.lam
    return {
        "point": point_to_doc(cert.point),
        "lambda": {"H": [scalar_to_doc(c) for c in lam.H], "weights": list(lam.weights),
                   "std_weights": list(lam.std_weights)},
        "twist": {"order": cert.c_order, "component": cert.c.component},
        "component": cert.component,
        "field_d": cert.field_d,
        "report": cert.report.as_dict(),
    }


def cmd_smooth_point(args: argparse.Namespace) -> dict:
    if args.input:
        doc = _load(args)
        x = point_from_doc(doc)
        G, inertia, N, p, fK = x.G, x.inertia, x.N, x.p, x.fK
    else:
        G = _group_arg(args.group)
        inertia, N, p, fK = trivial_inertia(G), nilpotent_arg(G, args.nilpotent), args.p, args.fK
    cert = smooth_point(G, inertia, N, p, fK)
    return _certificate_doc(cert)


def cmd_pushforward(args: argparse.Namespace) -> dict:
    if not args.morphism:
        raise DocumentError("--morphism is required")
    x = point_from_doc(_load(args))
    _require(x)
    if args.morphism.strip().startswith("sl2_from_triple"):
        G = _group_arg(args.group)
        trip = jacobson_morozov(G, nilpotent_arg(G, args.nilpotent))
        f = morphism("sl2_from_triple", G, trip)
    else:
        try:
            f = morphism(args.morphism)
        except GroupError as exc:
            raise DocumentError(str(exc)) from exc
    y = pushforward(f, x)
    return {"morphism": f.name, "point": point_to_doc(y), "report": _report_doc(y)}


def cmd_fontaine(args: argparse.Namespace) -> dict:
    doc = _load(args)
    if args.direction == "to-wd":
        M = module_from_doc(doc)
        problems = validate_module(M)
        if problems:
            raise CliInvalid({"valid": False, "violations": problems})
        return {"point": point_to_doc(fontaine_to_wd(M))}
    x = point_from_doc(doc)
    _require(x)
    M = wd_to_phi_module(x, args.fL)
    if args.direction == "to-phimod":
        return {"module": module_to_doc(M)}
    back = fontaine_to_wd(M)
    col = collapse(M)
    return {"roundtrip": back == x, "fL": M.fL, "collapsed_frobenius": element_to_doc(x.G, col.frobenius)}


def _hodge_from_doc(G: GroupModel, items: Any) -> HodgeType:
    """Cocharacters given as diagonal weights in the realization or as ``{"H": [...]}``."""
    if not isinstance(items, list) or not items:
        raise DocumentError("hodge must be a non-empty list of cocharacters")
    cochars = []
    for it in items:
        if isinstance(it, dict) and "H" in it:
            H = tuple(scalar_from_doc(c) for c in it["H"])
        elif isinstance(it, list) and len(it) == G.std_dim:
            H = G.lie_coords(Mat.diag([scalar_from_doc(c) for c in it]))
        else:
            raise DocumentError("each cocharacter is a weight list or {'H': coords}")
        try:
            cochars.append(make_cocharacter(G, H))
        except GroupError as exc:
            raise DocumentError(str(exc)) from exc
    return HodgeType(tuple(cochars))


def cmd_dims(args: argparse.Namespace) -> dict:
    doc = _load(args)
    if not isinstance(doc, dict):
        raise DocumentError("dims input must be a JSON object")
    if args.kind == "local":
        G = catalog(doc["group"]) if "group" in doc else _group_arg(args.group)
        lp = bool(doc.get("l_equals_p", False))
        hodge = _hodge_from_doc(G, doc["hodge"]) if "hodge" in doc else None
        out = {"local_dim": local_dim(G, hodge, bool(doc.get("fixed_det", False)), lp)}
        if hodge is not None:
            out["hodge_dim"] = hodge_dim(G, hodge)
            out["regular"] = is_regular(G, hodge)
        return out
    try:
        led = global_ledger(int(doc["Sinf_size"]), [int(h) for h in doc["archimedean_h0s"]],
                            int(doc["g0_dim"]), [int(f) for f in doc["places_over_p"]],
                            doc["dim_G_mod_B"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed ledger document: {exc}") from exc
    return led.as_dict()


SWEEP_HEADER = ["orbit", "kind", "index", "h0", "h1", "h2", "dual_h0", "smooth", "very_smooth"]


def _orbits(G: GroupModel, spec: str) -> list[tuple[str, tuple]]:
    n = _partition_block(G)
    if n is None:
        raise DocumentError(f"sweep needs a group with Jordan types, not {G.name}")
    if spec == "all":
        parts = list(partitions(n))
    else:
        parts = [tuple(int(v) for v in re.findall(r"\d+", chunk)) for chunk in spec.split(";")]
    return [(",".join(map(str, pt)), nilpotent_arg(G, ",".join(map(str, pt)))) for pt in parts]


def _sweep_task(task: tuple) -> list[list]:
    group_spec, label, N, count, seed, p, fK = task
    G = catalog(group_spec)
    rows = []
    cert = smooth_point(G, trivial_inertia(G), N, p, fK)
    r = cert.report
    rows.append([label, "smoothfactory", 0, r.h0, r.h1, r.h2, r.dual_h0, r.smooth, r.very_smooth])
    if count > 0:
        pts = sample_fiber(G, trivial_inertia(G), N, count, seed, p=p, fK=fK, include_base=False)
        for i, x in enumerate(pts, 1):
            r = cohomology_dims(x)
            rows.append([label, "sample", i, r.h0, r.h1, r.h2, r.dual_h0, r.smooth, r.very_smooth])
    return rows


def sweep_rows(G: GroupModel, orbit_spec: str = "all", count: int = 10, seed: int = 0,
               p: int = 2, fK: int = 1, jobs: int = 1) -> list[list]:
    """One smoothfactory row and ``count`` sampled rows per nilpotent orbit."""
    tasks = [(G.element_spec(), label, N, count, seed + i, p, fK)
             for i, (label, N) in enumerate(_orbits(G, orbit_spec))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_task, tasks))
    else:
        chunks = [_sweep_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def cmd_sweep(args: argparse.Namespace) -> tuple[dict, str]:
    G = _group_arg(args.group)
    rows = sweep_rows(G, args.partitions, args.count, args.seed, args.p, args.fK, args.jobs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow([str(v).lower() if isinstance(v, bool) else v for v in row])
    factory = [r for r in rows if r[1] == "smoothfactory"]
    summary = {
        "group": G.name,
        "rows": len(rows),
        "smoothfactory_rows": len(factory),
        "smoothfactory_all_smooth": all(r[7] for r in factory),
        "smooth_rows": sum(1 for r in rows if r[7]),
        "very_smooth_rows": sum(1 for r in rows if r[8]),
    }
    return summary, buf.getvalue()


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wdtangent",
                                     description="Deformation diagnostics of Weil–Deligne points.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON document path, inline JSON, or - for stdin")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--group", help="group spec such as GL2, SL(2), calG(2)")
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--fK", type=int, default=1)
    common.add_argument("--nilpotent", help="Jordan type such as 2,1 or coords:c1,c2,...")
    common.add_argument("--morphism", help="tensor(n,m), det(n), incl_block(...), incl_sl(n), sl2_from_triple")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=10)
    common.add_argument("--jobs", type=int, default=1)
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("validate", parents=[common], help="check the point constraints")
    sub.add_parser("cohomology", parents=[common], help="dimensions of the tangent-obstruction complex")
    sub.add_parser("very-smooth", parents=[common], help="run both very-smoothness tests")
    sub.add_parser("smooth-point", parents=[common], help="construct a certified smooth point")
    sub.add_parser("pushforward", parents=[common], help="push a point along a morphism")
    fo = sub.add_parser("fontaine", parents=[common], help="(phi, N, Gal)-modules and WD points")
    fo.add_argument("direction", choices=["to-wd", "to-phimod", "roundtrip"])
    fo.add_argument("--fL", type=int, default=None)
    di = sub.add_parser("dims", parents=[common], help="local and global dimension formulas")
    di.add_argument("kind", choices=["local", "global"])
    sw = sub.add_parser("sweep", parents=[common], help="batch run over nilpotent orbits")
    sw.add_argument("--partitions", default="all", help="'all' or Jordan types separated by ';'")
    return parser


_VERBS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "very-smooth": cmd_very_smooth,
    "smooth-point": cmd_smooth_point,
    "pushforward": cmd_pushforward,
    "fontaine": cmd_fontaine,
    "dims": cmd_dims,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_MALFORMED
    try:
        if args.verb == "sweep":
            summary, table = cmd_sweep(args)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(table)
                sys.stdout.write(dumps(summary) + "\n")
            else:
                sys.stdout.write(table)
            return EXIT_OK
        _emit(args, _VERBS[args.verb](args))
        return EXIT_OK
    except CliInvalid as exc:
        _emit(args, exc.report)
        return EXIT_INVALID
    except (InvalidPointError, ModuleError, InconsistencyError) as exc:
        _emit(args, {"valid": False, "error": str(exc)})
        return EXIT_INVALID
    except (DocumentError, GroupError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"wdtangent: malformed input: {exc}\n")
        return EXIT_MALFORMED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
