"""Command-line front end: construct, locus, verify.

JSON documents are emitted with 17-significant-digit decimal floats so a
double round-trips losslessly and repeated runs are byte-identical.  The
machine-readable document goes to stdout; diagnostics and error JSON go to
stderr.  Exit codes: 0 success, 1 malformed input, 2 degenerate geometry,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import loci
from .config import DEFAULT_TOL, Tolerances
from .construct import (
    RotationQuadrilateral,
    check_quadrilateral,
    construct_v1,
    construct_v2,
    from_displacements,
    random_rotation_quadrilateral,
)
from .errors import ConsistencyError, DegenerateError, RotQuadError
from .kinematics import Displacement
from .linegeom import PlueckerLine

DOC_VERSION = "1"


# ---------------------------------------------------------------------------
# deterministic JSON emission


def _fmt_scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError("non-finite number in document")
        return format(float(x), ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if x is None:
        return "null"
    raise TypeError(f"unsupported scalar {type(x)}")


def dumps(obj, indent: int = 0) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        parts = [dumps(v, indent + 2) for v in seq]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    return _fmt_scalar(obj)


# ---------------------------------------------------------------------------
# document schemas


def displacement_to_json(d: Displacement) -> dict:
    return {
        "rotation": [float(v) for v in d.rotation.ravel()],
        "translation": [float(v) for v in d.translation],
    }


def displacement_from_json(obj) -> Displacement:
    if not isinstance(obj, dict):
        raise ValueError("displacement entry must be an object")
    has_matrix = "rotation" in obj
    has_dq = "dq" in obj
    if has_matrix == has_dq:
        raise ValueError("displacement needs exactly one of 'rotation' or 'dq'")
    if has_dq:
        arr = np.asarray(obj["dq"], dtype=float)
        if arr.shape != (8,):
            raise ValueError("'dq' must hold 8 numbers")
        from .kinematics import DualQuaternion, displacement_from_dq

        return displacement_from_dq(DualQuaternion(arr[:4], arr[4:]))
    R = np.asarray(obj["rotation"], dtype=float)
    if R.size != 9:
        raise ValueError("'rotation' must hold 9 numbers (row-major)")
    t = np.asarray(obj.get("translation", [0.0, 0.0, 0.0]), dtype=float)
    if t.shape != (3,):
        raise ValueError("'translation' must hold 3 numbers")
    return Displacement(R.reshape(3, 3), t)


def line_to_json(line: PlueckerLine) -> dict:
    return {
        "direction": [float(v) for v in line.direction],
        "moment": [float(v) for v in line.moment],
    }


def line_from_json(obj) -> PlueckerLine:
    if not isinstance(obj, dict) or "direction" not in obj:
        raise ValueError("line entry must be an object with a 'direction'")
    d = np.asarray(obj["direction"], dtype=float)
    if "moment" in obj:
        return PlueckerLine(d, np.asarray(obj["moment"], dtype=float))
    if "point" in obj:
        return PlueckerLine.from_point_direction(np.asarray(obj["point"], dtype=float), d)
    raise ValueError("line entry needs 'moment' or 'point'")


def quad_to_doc(quad: RotationQuadrilateral, metadata: dict | None = None) -> dict:
    doc = {
        "version": DOC_VERSION,
        "displacements": [displacement_to_json(d) for d in quad.displacements],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def quad_from_doc(doc, tol: float = 1e-9) -> RotationQuadrilateral:
    if not isinstance(doc, dict):
        raise ValueError("document must be a JSON object")
    if doc.get("version") != DOC_VERSION:
        raise ValueError(f"unsupported document version {doc.get('version')!r}")
    disps = doc.get("displacements")
    if not isinstance(disps, list) or len(disps) != 4:
        raise ValueError("document needs exactly four displacements")
    return from_displacements([displacement_from_json(d) for d in disps], tol=tol)


# ---------------------------------------------------------------------------
# reports


def _proj_root_json(root) -> dict:
    return {
        "coords_re": [float(v) for v in root.coords.real],
        "coords_im": [float(v) for v in root.coords.imag],
        "multiplicity": int(root.multiplicity),
        "is_real": bool(root.is_real),
    }


def _quadric_json(quadric) -> list:
    Q = quadric.matrix
    return [float(Q[i, j]) for i in range(4) for j in range(i, 4)]


def point_locus_report(quad: RotationQuadrilateral, tols: Tolerances) -> list:
    locus = loci.point_locus(quad, tol=tols.concyclic)
    names = ["r01", "r12", "r23", "r30"] + ["u", "v"][: len(locus.transversal_lines)]
    kinds = ["axis"] * 4 + ["transversal"] * len(locus.transversal_lines)
    ts = np.linspace(-1.5, 1.5, 20) * quad.scale()
    out = []
    for name, kind, line in zip(names, kinds, locus.lines):
        worst = 0.0
        for x in line.points(ts):
            res = loci.concyclicity_check(loci.homologous_points(quad, x), tol=tols.concyclic)
            worst = max(worst, res.residual)
        out.append(
            {
                "id": name,
                "kind": kind,
                "pluecker": [float(v) for v in line.as_array()],
                "max_concyclicity_residual": worst,
            }
        )
    return out


def plane_locus_report(quad: RotationQuadrilateral, tols: Tolerances) -> dict:
    classes = loci.plane_locus(quad, tol=tols.general)
    recs = []
    for c in classes:
        recs.append(
            {
                "classification": c.classification,
                "matched_index": c.matched_index,
                "direction": None
                if c.normal_direction is None
                else [float(v) for v in c.normal_direction],
                "residuals": [float(c.residuals[0]), float(c.residuals[1])],
                "multiplicity": int(c.multiplicity),
                "root": _proj_root_json(c.root),
            }
        )
    return {
        "classes": recs,
        "total_multiplicity": int(sum(c.multiplicity for c in classes)),
        "valid_count": sum(
            1
            for c in classes
            if c.classification in ("axis-orthogonal", "transversal-orthogonal")
        ),
    }


def line_locus_report(quad: RotationQuadrilateral, tols: Tolerances) -> list:
    out = []
    names = ["u", "v"]
    for k, t in enumerate(quad.transversals):
        rep = loci.line_quadrilateral_check(quad, t, tol=tols.general)
        incidence = max(
            abs(t.reciprocal(axis)) for axis in quad.rel_axes_moving
        )
        out.append(
            {
                "id": names[k] if k < 2 else f"t{k}",
                "pluecker": [float(v) for v in t.as_array()],
                "verdict": bool(rep.verdict),
                "orientation_ok": bool(rep.orientation_ok),
                "max_incidence_residual": float(incidence),
                "reason": rep.reason,
            }
        )
    return out


def hyperboloid_report(quad: RotationQuadrilateral, tols: Tolerances) -> list:
    out = []
    for k, name in enumerate(["u", "v"][: len(quad.transversals)]):
        th = loci.trajectory_hyperboloid(quad, name, tol=tols.quadric_residual)
        out.append(
            {
                "transversal": name,
                "quadric_upper_triangle": _quadric_json(th.quadric),
                "axis": [float(v) for v in th.axis.as_array()],
                "edge_sums": [th.edge_sums[0], th.edge_sums[1]],
                "configuration": th.configuration,
                "criterion_gap": th.criterion_gap,
                "max_line_residual": th.max_line_residual,
                "max_circle_residual": th.max_circle_residual,
                "max_center_axis_distance": th.max_center_axis_distance,
            }
        )
    return out


def locus_report(quad: RotationQuadrilateral, kind: str, tols: Tolerances) -> dict:
    report: dict = {"version": DOC_VERSION, "tolerance": tols.general}
    report["transversal_reality"] = quad.transversal_kind
    report["transversals_real"] = quad.transversal_kind in ("real_pair", "real_double")
    if kind in ("point", "all"):
        report["point_locus"] = point_locus_report(quad, tols)
    if kind in ("plane", "all"):
        report["plane_locus"] = plane_locus_report(quad, tols)
    if kind in ("line", "all"):
        report["line_locus"] = line_locus_report(quad, tols)
    if kind in ("point", "line", "all") and quad.transversal_kind in (
        "real_pair",
        "real_double",
    ):
        report["hyperboloids"] = hyperboloid_report(quad, tols)
    return report


def write_samples_csv(path: str, quad: RotationQuadrilateral, tols: Tolerances) -> None:
    """Sampled locus points and trajectory circles for external plotting."""
    locus = loci.point_locus(quad, tol=tols.concyclic)
    names = ["r01", "r12", "r23", "r30"] + ["u", "v"][: len(locus.transversal_lines)]
    rows = []
    ts = np.linspace(-1.5, 1.5, 20) * quad.scale()
    for name, line in zip(names, locus.lines):
        for t, p in zip(ts, line.points(ts)):
            rows.append((f"point:{name}", t, p[0], p[1], p[2]))
    for k, tname in enumerate(["u", "v"][: len(quad.transversals)]):
        tline = quad.transversals[k]
        for t in np.linspace(-1.2, 1.2, 10) * quad.scale():
            x = tline.point_at(t)
            res = loci.concyclicity_check(loci.homologous_points(quad, x), tol=tols.concyclic)
            if res.circle is None or res.circle.kind != "circle":
                continue
            pts = res.circle.sample(20)
            th = np.linspace(0.0, 2.0 * math.pi, 20, endpoint=False)
            for ang, p in zip(th, pts):
                rows.append((f"circle:{tname}:{format(t, '.6g')}", ang, p[0], p[1], p[2]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["locus_id", "t", "x", "y", "z"])
        for rid, t, x, y, z in rows:
            writer.writerow(
                [rid] + [format(float(v), ".17g") for v in (t, x, y, z)]
            )


# ---------------------------------------------------------------------------
# verification suite


def _check_point_locus(quad, tols):
    try:
        loci.point_locus(quad, tol=tols.concyclic)
    except (RotQuadError, ValueError) as exc:
        return [f"point locus: {exc}"]
    return []


def _check_hyperboloids(quad, tols):
    if quad.transversal_kind not in ("real_pair", "real_double"):
        return []
    out = []
    for name in ["u", "v"][: len(quad.transversals)]:
        try:
            th = loci.trajectory_hyperboloid(quad, name, tol=tols.quadric_residual)
        except RotQuadError as exc:
            out.append(f"hyperboloid {name}: {exc}")
            continue
        if th.criterion_gap > tols.edge_sums * max(1.0, *th.edge_sums):
            out.append(f"hyperboloid {name}: edge-sum criterion fails")
        if th.max_center_axis_distance > tols.axis_distance * quad.scale():
            out.append(f"hyperboloid {name}: circle centers leave the axis")
    return out


def _check_plane_locus(quad, tols):
    try:
        classes = loci.plane_locus(quad, tol=tols.general)
    except RotQuadError as exc:
        return [f"plane locus: {exc}"]
    out = []
    total = sum(c.multiplicity for c in classes)
    if total != 12:
        out.append(f"plane locus: multiplicities sum to {total}, expected 12")
    valid = [
        c
        for c in classes
        if c.classification in ("axis-orthogonal", "transversal-orthogonal")
    ]
    if quad.transversal_kind == "real_pair" and len(valid) != 6:
        out.append(f"plane locus: {len(valid)} valid classes, expected 6")
    if any(c.classification == "unmatched" for c in classes):
        out.append("plane locus: unmatched real non-spurious class")
    return out


def _check_line_locus(quad, tols):
    """Every locus line is a transversal; a transversal whose image quad has
    the convex (orientation-alternating) configuration must be in the locus."""
    found = loci.line_locus(quad, tol=tols.general)
    out = []
    for f in found:
        if not any(t.same_line(f) for t in quad.transversals):
            out.append("line locus: non-transversal line reported")
    names = ["u", "v"][: len(quad.transversals)]
    for name, t in zip(names, quad.transversals):
        try:
            th = loci.trajectory_hyperboloid(quad, name, tol=tols.quadric_residual)
        except RotQuadError:
            continue
        in_locus = any(t.same_line(f) for f in found)
        if th.configuration == "convex" and not in_locus:
            out.append(f"line locus: convex transversal {name} missing")
        if th.configuration == "crossed" and in_locus:
            out.append(f"line locus: crossed transversal {name} passes orientation")
    return out


def _check_line_conditions(quad, tols):
    out = []
    for k, t in enumerate(quad.transversals):
        rep = loci.line_condition_fit(quad, t, tol=tols.general)
        if not rep.coplanarity_zero or not rep.circularity_zero:
            out.append(f"line conditions: transversal {k} polynomials do not vanish")
    return out


INVARIANT_CHECKS = [
    ("construction", lambda q, tols: check_quadrilateral(q, tols.conjugacy)),
    ("point-locus", _check_point_locus),
    ("trajectory-hyperboloid", _check_hyperboloids),
    ("plane-locus", _check_plane_locus),
    ("line-locus", _check_line_locus),
    ("line-condition-oracle", _check_line_conditions),
]


def run_verification(quads, tols: Tolerances):
    """Run every invariant over (label, quad) pairs; returns summary dict."""
    counts = {name: {"pass": 0, "fail": 0} for name, _ in INVARIANT_CHECKS}
    failures = []
    for label, quad in quads:
        for name, fn in INVARIANT_CHECKS:
            violations = fn(quad, tols)
            if violations:
                counts[name]["fail"] += 1
                failures.append(
                    {"invariant": name, "seed": label, "details": violations}
                )
            else:
                counts[name]["pass"] += 1
    return {"checks": counts, "failures": failures, "all_pass": not failures}


# ---------------------------------------------------------------------------
# command implementations


def _emit(doc: dict, out_path: str | None) -> None:
    text = dumps(doc) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_json(code: int, kind: str, message: str) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message}) + "\n")
    return code


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def cmd_construct(args) -> int:
    try:
        if args.random:
            quad = random_rotation_quadrilateral(args.seed, scale=args.scale)
            meta = {"seed": int(args.seed), "scale": float(args.scale)}
        else:
            if not args.input:
                return _error_json(1, "usage", "--variant requires -i/--input")
            data = _load_json(args.input)
            if args.variant == "v1":
                quad = construct_v1(
                    displacement_from_json(data["alpha"]),
                    int(data.get("index", 0)),
                    [line_from_json(o) for o in data["axes"]],
                    [float(w) for w in data["angles"]],
                )
            elif args.variant == "v2":
                quad = construct_v2(
                    displacement_from_json(data["alpha_i"]),
                    displacement_from_json(data["alpha_i2"]),
                    line_from_json(data["axis_first"]),
                    line_from_json(data["axis_third"]),
                    int(data.get("index", 0)),
                )
            else:
                return _error_json(1, "usage", "--variant must be v1 or v2 (or use --random)")
            meta = None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return _error_json(1, "malformed-input", str(exc))
    except (DegenerateError, ConsistencyError) as exc:
        return _error_json(2, "degenerate", str(exc))
    except RotQuadError as exc:
        return _error_json(2, "geometry", str(exc))
    _emit(quad_to_doc(quad, meta), args.output)
    return 0


def _tolerances_from_args(args) -> Tolerances:
    overrides = None
    if getattr(args, "tol_config", None):
        with open(args.tol_config) as fh:
            overrides = json.load(fh)
    return Tolerances.from_global(args.tol, overrides)


def cmd_locus(args) -> int:
    try:
        tols = _tolerances_from_args(args)
        doc = _load_json(args.input)
        quad = quad_from_doc(doc, tol=tols.general)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return _error_json(1, "malformed-input", str(exc))
    except (DegenerateError, ConsistencyError) as exc:
        return _error_json(2, "degenerate", str(exc))
    try:
        report = locus_report(quad, args.kind, tols)
        if args.samples_csv:
            write_samples_csv(args.samples_csv, quad, tols)
    except (DegenerateError, ConsistencyError) as exc:
        return _error_json(2, "degenerate", str(exc))
    _emit(report, args.output)
    return 0


def cmd_verify(args) -> int:
    try:
        tols = _tolerances_from_args(args)
    except (json.JSONDecodeError, OSError, ValueError) as exc:
        return _error_json(1, "malformed-input", str(exc))
    quads = []
    if args.doc:
        try:
            doc = _load_json(args.doc)
            quads.append((args.doc, quad_from_doc(doc, tol=tols.general)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            return _error_json(1, "malformed-input", str(exc))
        except (DegenerateError, ConsistencyError) as exc:
            sys.stderr.write(f"document rejected: {exc}\n")
            summary = {
                "checks": {"construction": {"pass": 0, "fail": 1}},
                "failures": [
                    {"invariant": "construction", "seed": args.doc, "details": [str(exc)]}
                ],
                "all_pass": False,
            }
            _emit(summary, None)
            return 3
    else:
        for seed in range(args.random_count):
            quads.append((seed, random_rotation_quadrilateral(seed, scale=args.scale)))
    summary = run_verification(quads, tols)
    _emit(summary, None)
    for name, c in summary["checks"].items():
        sys.stderr.write(f"{name}: {c['pass']} pass, {c['fail']} fail\n")
    return 0 if summary["all_pass"] else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotquad",
        description="Rotation quadrilaterals: construction and loci of "
        "homologous points, planes and lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="construct a rotation quadrilateral")
    c.add_argument("--variant", choices=["v1", "v2"])
    c.add_argument("--random", action="store_true", help="seeded random quadrilateral")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--scale", type=float, default=1.0)
    c.add_argument("-i", "--input", help="variant input JSON")
    c.add_argument("-o", "--output", help="write document here instead of stdout")
    c.set_defaults(fn=cmd_construct)

    l = sub.add_parser("locus", help="compute locus reports for a document")
    l.add_argument("--kind", choices=["point", "plane", "line", "all"], default="all")
    l.add_argument("-i", "--input", required=True, help="QuadrilateralDoc JSON")
    l.add_argument("--tol", type=float, default=DEFAULT_TOL)
    l.add_argument("--tol-config", help="JSON file with per-check tolerance overrides")
    l.add_argument("--samples-csv", help="also write sampled points as CSV")
    l.add_argument("-o", "--output")
    l.set_defaults(fn=cmd_locus)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--doc", help="verify one document")
    v.add_argument("--random-count", type=int, default=10)
    v.add_argument("--scale", type=float, default=1.0)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--tol-config", help="JSON file with per-check tolerance overrides")
    v.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
