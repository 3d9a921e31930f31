"""Command line interface: ``implode faces|semistable|implode|verify --scenario FILE``.

Exit codes: 0 success, 1 property failure, 2 input error, 3 inconclusive
verdict under --strict.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources
from typing import Any, Callable

import jsonschema
import numpy as np

from . import git
from . import implosion as imp
from . import lie_core as lc
from . import moment as mm
from . import typea_model as tm
from .serialize import (
    canonical_json,
    decode_matrix,
    encode_matrix,
    fraction_list,
    parse_complex,
    parse_rational,
)

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SCHEMA_VERSION = 1
MAX_EQUIVALENCE_POINTS = 32


class InputError(ValueError):
    pass


def load_schema(name: str) -> dict:
    return json.loads(resources.files("implode").joinpath("schemas", name).read_text())


def load_scenario(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scenario: {exc}") from exc
    try:
        jsonschema.validate(data, load_schema("scenario.schema.json"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"scenario schema violation at {where}: {exc.message}") from exc
    return data


# ---------------------------------------------------------------------------
# shared helpers


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("IMPLODE_THREADS", "")))
    except ValueError:
        return max(1, min(8, os.cpu_count() or 1))


def _parallel_map(fn: Callable, items: list) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _seed(scenario: dict, override: int | None, required: bool) -> int | None:
    seed = override if override is not None else scenario.get("params", {}).get("seed")
    if seed is None and required:
        raise InputError("a seed is required (params.seed or --seed) for randomised verdicts")
    return seed


def _substreams(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def _rank(scenario: dict) -> int:
    rs = scenario.get("root_system")
    if rs is None:
        raise InputError("root_system is required for this command")
    return int(rs["rank"])


def _parabolic(scenario: dict, rank: int, default_gl_r: bool) -> lc.ParabolicData | None:
    par = scenario.get("parabolic")
    if par is None:
        return imp.gl_r_parabolic(rank) if default_gl_r else None
    s_p = par["levi_simple_roots"]
    if any(j > rank for j in s_p):
        raise InputError(f"levi_simple_roots must lie in 1..{rank}")
    return imp.parabolic(rank, s_p)


def _budget(scenario: dict, seed: int) -> git.Budget:
    params = scenario.get("params", {})
    flow = params.get("flow", {})
    base = git.Budget()
    return git.Budget(
        samples=params.get("samples", base.samples),
        seed=seed,
        step=flow.get("step", base.step),
        max_iter=flow.get("max_iter", base.max_iter),
        tol=flow.get("tol", base.tol),
    )


def _stratum_row(s: imp.StratumDescriptor) -> dict:
    row = s.to_json()
    row["quotient_group"] = s.quotient_group
    return row


INDEXING_NOTE = (
    "m is the multiplicity of the last eigenvalue in the full spectrum; "
    "the commutator is SU(m), checked against the stabiliser dimension m^2-1"
)


# ---------------------------------------------------------------------------
# faces


def cmd_faces(scenario: dict, seed: int | None = None) -> tuple[dict, int]:
    rank = _rank(scenario)
    rs = lc.build_type_a(rank)
    faces = []
    for f in lc.enumerate_faces(rs):
        faces.append(
            {
                "face": list(f.sorted()),
                "levi_type": [f"{t}{r}" for t, r in lc.levi_type_of_face(rs, f)],
                "representative": fraction_list(lc.face_representative(rs, f)),
            }
        )
    report: dict[str, Any] = {"command": "faces", "schema": SCHEMA_VERSION, "rank": rank, "faces": faces}
    pd = _parabolic(scenario, rank, default_gl_r=False)
    if pd is not None:
        eps = parse_rational(scenario.get("params", {}).get("epsilon_desing", "1/100"))
        try:
            desing = imp.desing_strata(pd, Fraction(eps))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        report["levi_simple_roots"] = sorted(pd.levi_simple_roots)
        report["strata"] = [_stratum_row(s) for s in imp.strata_enumerate(pd)]
        report["desing_strata"] = [_stratum_row(s) for s in desing]
        report["indexing"] = INDEXING_NOTE
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# semistable


def _verdict_json(v: git.StabilityVerdict) -> dict:
    cert: dict[str, Any] = {
        "candidates": v.report.get("candidates", 0),
        "boundary_hits": v.report.get("boundary_hits", 0),
    }
    if v.group_element is not None:
        cert["group_element"] = encode_matrix(v.group_element.defining)
    if v.functional is not None:
        cert["functional"] = fraction_list(v.functional)
    for key in ("final_norm", "sigma_min", "beta_min"):
        val = getattr(v, key)
        if val is not None:
            cert[key] = float(val)
    if "flow_iterations" in v.report:
        cert["flow_iterations"] = v.report["flow_iterations"]
    return {"verdict": v.tag, "certificate": cert}


def _parse_torus_point(p) -> list:
    if not isinstance(p, list) or not p:
        raise InputError("torus points are nonempty coordinate lists")
    if all(isinstance(c, int) and not isinstance(c, bool) or (isinstance(c, str) and "/" in c) for c in p):
        return [parse_rational(c) for c in p]
    return [parse_complex(c) for c in p]


def _complex_vector(p, length: int | None = None) -> np.ndarray:
    if not isinstance(p, list):
        raise InputError("points must be coordinate lists")
    v = np.array([parse_complex(c) for c in p], complex)
    if length is not None and v.shape[0] != length:
        raise InputError(f"point has {v.shape[0]} coordinates, expected {length}")
    if not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0:
        raise InputError("point must be finite and nonzero")
    return v


def cmd_semistable(scenario: dict, seed: int | None = None) -> tuple[dict, int]:
    action = scenario.get("action")
    points = scenario.get("points")
    if action is None or not points:
        raise InputError("semistable needs an action and at least one point")
    kind = action["kind"]
    params = action.get("parameters", {})
    rows: list[dict]

    if kind == "torus":
        if "weights" not in params:
            raise InputError("torus action needs parameters.weights")
        weights = [[parse_rational(c) for c in (w if isinstance(w, list) else [w])] for w in params["weights"]]
        act = mm.TorusDiagonal(weights)
        rows = []
        for p in points:
            x = _parse_torus_point(p)
            if len(x) != len(weights):
                raise InputError("torus point needs one coordinate per weight")
            hv = git.torus_semistable(act, x)
            tag = {git.OUTSIDE: git.UNSTABLE, git.BOUNDARY: git.SEMISTABLE, git.INTERIOR: git.STABLE}[hv.tag]
            cert: dict[str, Any] = {"hull": hv.tag}
            if hv.separating_functional is not None:
                cert["functional"] = fraction_list(hv.separating_functional)
            rows.append({"verdict": tag, "certificate": cert})
    else:
        seed = _seed(scenario, seed, required=True)
        streams = _substreams(seed, len(points))
        budgets = [_budget(scenario, s) for s in streams]
        if kind == "p1_power":
            m = params.get("m", len(points[0]) if isinstance(points[0], list) else 0)
            act = mm.product_p1(m)

            def parse(p):
                if not isinstance(p, list) or len(p) != m:
                    raise InputError(f"p1_power points are lists of {m} entries")
                try:
                    return [git.p1_vector(parse_complex(z)) for z in p]
                except ValueError as exc:
                    raise InputError(str(exc)) from exc

            xs = [parse(p) for p in points]
            verdicts = _parallel_map(lambda a: git.reductive_semistability(act, a[0], a[1]), list(zip(xs, budgets)))
            rows = []
            for x, v in zip(xs, verdicts):
                row = _verdict_json(v)
                if m == 4:
                    row["oracle"] = git.p1p4_oracle(x)
                rows.append(row)
        elif kind == "sl2_sym":
            blocks = params.get("blocks")
            if not blocks:
                raise InputError("sl2_sym action needs parameters.blocks")
            n = sum(k + 1 for k in blocks)
            level = scenario.get("params", {}).get("N")
            xs = [_complex_vector(p, n) for p in points]
            verdicts = _parallel_map(
                lambda a: git.cplus_pn_semistable(blocks, a[0], level, a[1]), list(zip(xs, budgets))
            )
            rows = [_verdict_json(v) for v in verdicts]
        elif kind == "matrix":
            if "generators" not in params:
                raise InputError("matrix action needs parameters.generators")
            gens = np.array([decode_matrix(g) for g in params["generators"]])
            basis = np.array([decode_matrix(b) for b in params["basis"]]) if "basis" in params else None
            try:
                act = mm.matrix_generators(gens, basis)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            xs = [[_complex_vector(p, act.factors[0].dim)] for p in points]
            verdicts = _parallel_map(lambda a: git.reductive_semistability(act, a[0], a[1]), list(zip(xs, budgets)))
            rows = [_verdict_json(v) for v in verdicts]
        else:  # pragma: no cover - schema forbids
            raise InputError(f"unknown action kind {kind}")

    for i, r in enumerate(rows):
        r["index"] = i
    summary = {t: sum(r["verdict"] == t for r in rows) for t in (git.STABLE, git.SEMISTABLE, git.UNSTABLE, git.INCONCLUSIVE)}
    report = {"command": "semistable", "schema": SCHEMA_VERSION, "action": kind, "points": rows, "summary": summary}
    if seed is not None:
        report["seed"] = seed
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# implode


def _model_point_row(p: tm.ImplosionPoint, m: np.ndarray, eps: float) -> dict:
    st = imp.kp_cone_classify(p.zeta, eps)
    rs = p.zeta.parabolic.root_system
    face = lc.face_of_dominant(rs, lc.Weight(p.zeta.spectrum), eps=eps)
    return {
        "in_cone": True,
        "spectrum": [float(v) for v in p.zeta.spectrum],
        "stratum": _stratum_row(imp.StratumDescriptor(face, st)),
        "stabilizer_dim": tm.stabilizer_dim_oracle(m),
        "rank_of_matrix": int(np.linalg.matrix_rank(m, tol=eps * max(1.0, np.abs(m).max()))) if m.size else 0,
        "model_matrix": encode_matrix(m),
    }


def cmd_implode(scenario: dict, seed: int | None = None) -> tuple[dict, int]:
    rank = _rank(scenario)
    points = scenario.get("points")
    if not points:
        raise InputError("implode needs at least one point")
    eps = scenario.get("params", {}).get("eps", imp.DEFAULT_EPS)
    pd = _parabolic(scenario, rank, default_gl_r=True)
    gl_r = pd.levi_simple_roots == lc.gl_r_parabolic(rank)
    rows, matrices = [], []
    for i, p in enumerate(points):
        if not isinstance(p, dict) or len(p) != 1 or next(iter(p)) not in ("matrix", "moment", "pair"):
            raise InputError(f"point {i}: expected exactly one of matrix, moment or pair")
        key, val = next(iter(p.items()))
        try:
            if key == "matrix":
                if not gl_r:
                    raise InputError("model matrices are defined for the GL(r) parabolic only")
                m = decode_matrix(val)
                if m.shape != (rank + 1, rank):
                    raise InputError(f"point {i}: model matrix must be {rank + 1} x {rank}")
                row = _model_point_row(tm.matrix_to_pair(m), m, eps)
                matrices.append(m)
            elif key == "pair":
                if not gl_r:
                    raise InputError("pairs are defined for the GL(r) parabolic only")
                if not isinstance(val, dict) or set(val) - {"k", "spectrum", "frame"} or not {"k", "spectrum"} <= set(val):
                    raise InputError(f"point {i}: pair needs k, spectrum and optionally frame")
                frame = decode_matrix(val["frame"]) if "frame" in val else None
                spectrum = [parse_rational(c) for c in val["spectrum"]]
                ce = tm.gl_r_cone_element(spectrum, frame)
                pt = tm.ImplosionPoint(decode_matrix(val["k"]), ce)
                m = tm.pair_to_matrix(pt)
                row = _model_point_row(pt, m, eps)
                matrices.append(m)
            else:
                z = decode_matrix(val)
                in_cone, stratum = imp.classify_implosion_point(z, pd, eps)
                row = {"in_cone": in_cone, "stratum": _stratum_row(stratum) if stratum else None}
                matrices.append(None)
        except InputError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"point {i}: {exc}") from exc
        row["index"] = i
        row["kind"] = key
        rows.append(row)
    report: dict[str, Any] = {
        "command": "implode",
        "schema": SCHEMA_VERSION,
        "rank": rank,
        "levi_simple_roots": sorted(pd.levi_simple_roots),
        "points": rows,
        "indexing": INDEXING_NOTE,
    }
    if len(points) <= MAX_EQUIVALENCE_POINTS:
        tol = scenario.get("params", {}).get("tolerance", 1e-8)
        eq = []
        for a in matrices:
            eq.append(
                [None if a is None or b is None else bool(np.linalg.norm(a - b) <= tol) for b in matrices]
            )
        report["equivalence"] = eq
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# verify


def property_suite(rank: int, seed: int, trials: int = 100, tolerance: float = 1e-9) -> dict:
    """Section, moment-formula and round-trip residuals plus the stabiliser table."""
    rng = np.random.default_rng(seed)
    rs = lc.build_type_a(rank)
    section = left = right = round_trip = 0.0
    equivalent = True
    for _ in range(trials):
        z = tm.random_cone_element(rank, rng)
        section = max(section, tm.section_check(z))
        k = mm.random_su(rank + 1, rng)
        p = tm.ImplosionPoint(k, z)
        m = tm.pair_to_matrix(p)
        left = max(left, float(np.linalg.norm(tm.left_moment(m) - k @ z.matrix() @ k.conj().T)))
        right = max(right, tm.right_moment_residual(p))
    for _ in range(2 * trials):
        m = rng.standard_normal((rank + 1, rank)) + 1j * rng.standard_normal((rank + 1, rank))
        q = tm.matrix_to_pair(m)
        round_trip = max(round_trip, float(np.linalg.norm(tm.pair_to_matrix(q) - m)))
        equivalent &= tm.equivalent_points(q, tm.matrix_to_pair(tm.pair_to_matrix(q)))
    table = []
    pd = imp.gl_r_parabolic(rank)
    for face in lc.enumerate_faces(rs):
        rep = lc.face_representative(rs, face)
        ce = imp.ConeElement(tuple(rep), np.eye(rank + 1, dtype=complex), pd)
        mult = imp.kp_cone_classify(ce).bottom_multiplicity
        oracle = tm.stabilizer_dim_oracle(tm.pair_to_matrix(tm.ImplosionPoint(np.eye(rank + 1), ce)))
        table.append({"face": list(face.sorted()), "m": mult, "oracle": oracle, "expected": mult * mult - 1})
    residuals = {"section": section, "moment_left": left, "moment_right": right, "round_trip": round_trip}
    passed = all(v < tolerance for v in residuals.values()) and equivalent and all(
        r["oracle"] == r["expected"] for r in table
    )
    return {
        "max_residuals": residuals,
        "round_trip_equivalent": equivalent,
        "stabilizer_table": table,
        "passed": passed,
    }


def cmd_verify(scenario: dict, seed: int | None = None) -> tuple[dict, int]:
    rank = _rank(scenario)
    if rank > 4:
        raise InputError("verify supports rank at most 4")
    seed = _seed(scenario, seed, required=True)
    params = scenario.get("params", {})
    tolerance = params.get("tolerance", 1e-9)
    trials = params.get("trials", 100)
    suite = property_suite(rank, seed, trials, tolerance)
    report = {"command": "verify", "schema": SCHEMA_VERSION, "rank": rank, "seed": seed, "tolerance": tolerance, **suite}
    return report, EXIT_OK if suite["passed"] else EXIT_PROPERTY


COMMANDS = {"faces": cmd_faces, "semistable": cmd_semistable, "implode": cmd_implode, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# output


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = report["command"]
    if cmd == "faces":
        if "strata" in report:
            w.writerow(["face", "m", "pi", "group_type", "desing_quotient", "torus_rank"])
            for s, d in zip(report["strata"], report["desing_strata"]):
                w.writerow([" ".join(map(str, s["face"])), s["m"], " ".join(map(str, s["pi"])), s["group_type"], d["quotient_group"], d["torus_rank"]])
        else:
            w.writerow(["face", "levi_type"])
            for f in report["faces"]:
                w.writerow([" ".join(map(str, f["face"])), " ".join(f["levi_type"])])
    elif cmd == "semistable":
        w.writerow(["index", "verdict", "oracle"])
        for r in report["points"]:
            w.writerow([r["index"], r["verdict"], r.get("oracle", "")])
    elif cmd == "implode":
        w.writerow(["index", "kind", "in_cone", "face", "m", "pi", "group_type"])
        for r in report["points"]:
            s = r["stratum"] or {}
            w.writerow([r["index"], r["kind"], r["in_cone"], " ".join(map(str, s.get("face", []))), s.get("m", ""), " ".join(map(str, s.get("pi", []))), s.get("group_type", "")])
    else:
        w.writerow(["quantity", "value"])
        for k in sorted(report["max_residuals"]):
            w.writerow([k, format(report["max_residuals"][k], ".17g")])
        w.writerow(["passed", report["passed"]])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    return canonical_json(report) if fmt == "json" else to_csv(report)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="implode", description="Implosion strata and GIT stability tools")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--scenario", required=True, help="scenario JSON file")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--strict", action="store_true", help="exit 3 if any verdict is inconclusive")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        report, code = COMMANDS[args.command](scenario, args.seed)
    except InputError as exc:
        print(f"implode: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_OK and args.strict and report.get("summary", {}).get(git.INCONCLUSIVE, 0):
        return EXIT_INCONCLUSIVE
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
