"""Command-line interface: ``bisyz <subcommand> [flags]``.

Exit codes: 0 success, 2 precondition failure (range, basepoint-freeness, bad input),
1 internal error. Diagnostics go to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .constructions import (
    RANGE_B,
    ConstructionUnavailable,
    build_V,
    build_W,
    range_classify,
    t_r,
    verify_recipe,
)
from .core import Ambient, BisyzError, Bidegree, Polarization, enumerate_monomials, parse_monomial_list
from .linsys import LinearSystem, monomial_system, random_general_system
from .moduli import moduli_tangent_dim
from .search import (
    SearchTask,
    brenner_report,
    format_report,
    load_records,
    sample_general,
    sweep,
)
from .stability import certify, certify_degree_gap, recheck_certificate
from .syzygy import h0_twist, h0_wedge_twist, syzygy_profile


class UsageError(BisyzError):
    pass


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + n for n in missing))


def load_system(args) -> LinearSystem:
    """--system as a JSON file path or an inline comma-separated monomial list;
    without --system, --seed and --r draw a generic system on the complete support."""
    text = args.system
    if text is None:
        if args.seed is not None and args.r is not None:
            _need(args, "m", "n", "a", "b")
            amb, L = Ambient(args.m, args.n), Polarization(args.a, args.b)
            return random_general_system(amb, L, enumerate_monomials(amb, (L.a, L.b)), args.r, args.seed,
                                         args.field)
        raise UsageError("--system is required (or --seed with --r for a generic system)")
    path = Path(text)
    if text.strip().endswith(".json") or (path.exists() and path.is_file()):
        data = json.loads(path.read_text(encoding="utf-8"))
        if "system" in data and "support" not in data:
            data = data["system"]
        sys_ = LinearSystem.from_json(data)
        for flag, value in (("m", sys_.ambient.m), ("n", sys_.ambient.n),
                            ("a", sys_.polarization.a), ("b", sys_.polarization.b)):
            given = getattr(args, flag)
            if given is not None and given != value:
                raise UsageError(f"--{flag} {given} disagrees with the system file ({flag} = {value})")
        return sys_
    _need(args, "m", "n")
    amb = Ambient(args.m, args.n)
    monos = parse_monomial_list(text, amb)
    a, b = args.a, args.b
    if a is None or b is None:
        a, b = monos[0].bidegree
    return monomial_system(amb, Polarization(a, b), monos)


def _twist(args) -> Bidegree:
    _need(args, "x", "y")
    return Bidegree(args.x, args.y)


# ----- subcommands ----------------------------------------------------------------------------

def cmd_h0(args):
    sys_ = load_system(args)
    tw = _twist(args)
    return {"artifact": "h0", "system": sys_.to_json(), "x": tw.x, "y": tw.y,
            "h0": h0_twist(sys_, tw, args.method)}


def cmd_wedge(args):
    sys_ = load_system(args)
    tw = _twist(args)
    _need(args, "q")
    return {"artifact": "wedge", "system": sys_.to_json(), "q": args.q, "x": tw.x, "y": tw.y,
            "h0": h0_wedge_twist(sys_, args.q, tw, args.method)}


def cmd_tmin(args):
    sys_ = load_system(args)
    prof = syzygy_profile(sys_, with_mingens=args.mingens)
    return {"artifact": "profile", "system_json": sys_.to_json(), **prof.to_json()}


def cmd_certify(args):
    if args.recheck:
        data = json.loads(Path(args.recheck).read_text(encoding="utf-8"))
        problems = recheck_artifact(data)
        out = {"artifact": "recheck", "source": str(args.recheck), "ok": not problems, "problems": problems}
        if problems:
            raise RecheckFailed(out)
        return out
    sys_ = load_system(args)
    cert = certify(sys_, args.strategy, assume_bpf=args.assume_bpf)
    out = {"artifact": "certificate", **cert.to_json()}
    out["certificate_hash"] = cert.content_hash()
    return out


def cmd_construct(args):
    _need(args, "m", "n", "a", "b", "r")
    recipe = build_W(args.m, args.n, args.a, args.b, args.r, strict=False)
    out = {"artifact": "recipe", **recipe.to_json()}
    try:
        V = build_V(args.m, args.n, args.a, args.b, args.r)
        verdict = certify_degree_gap(V)
        out["V"] = {"system": V.to_json(), "degree_gap": verdict.to_json()}
    except ConstructionUnavailable as exc:
        out["V"] = {"unavailable": str(exc)}
    if not recipe.verified:
        raise PartialResult(out, f"W misses the dimension bound: N = {recipe.N} < {recipe.report['bound']}")
    return out


def cmd_classify(args):
    _need(args, "m", "n", "a", "b", "r")
    rc = range_classify(args.m, args.n, args.a, args.b, args.r)
    out = {"artifact": "classify", "parameters": {"m": args.m, "n": args.n, "a": args.a, "b": args.b, "r": args.r},
           **rc.to_json()}
    if rc.value == RANGE_B:
        out["t_r"] = t_r(args.m, args.n, args.a, args.b, args.r)
    return out


def cmd_moduli(args):
    _need(args, "m", "n", "a", "b", "r")
    rep = moduli_tangent_dim(Ambient(args.m, args.n), Polarization(args.a, args.b), args.r)
    return {"artifact": "moduli", **rep.to_json()}


def _out_dir(args) -> Optional[Path]:
    return Path(args.out) if args.out else None


def cmd_sweep(args):
    _need(args, "m", "n", "a", "b", "r")
    if args.samples:
        amb, L = Ambient(args.m, args.n), Polarization(args.a, args.b)
        res = sample_general(amb, L, args.r, args.samples, args.seed or 0, args.strategy, args.field)
        return {"artifact": "samples", **res}
    task = SearchTask(args.m, args.n, args.a, args.b, args.r, args.strategy, not args.no_symmetry,
                      max_records=args.max_records, time_budget_s=args.time_budget)
    res = sweep(task, out_dir=_out_dir(args), jobs=args.jobs, resume=not args.fresh)
    return {"artifact": "sweep", **res.summary, "strategy": args.strategy, "records": str(res.records_path),
            "checkpoint": str(res.checkpoint_path)}


def cmd_report(args):
    _need(args, "m", "n", "a", "b")
    rows = brenner_report(Ambient(args.m, args.n), Polarization(args.a, args.b), run_sweeps=not args.no_sweeps,
                          max_supports=args.max_supports, out_dir=_out_dir(args), jobs=args.jobs,
                          strategy=args.strategy)
    return {"artifact": "report", "m": args.m, "n": args.n, "a": args.a, "b": args.b, "rows": rows}


COMMANDS = {
    "h0": cmd_h0,
    "wedge": cmd_wedge,
    "tmin": cmd_tmin,
    "certify": cmd_certify,
    "construct": cmd_construct,
    "classify": cmd_classify,
    "moduli": cmd_moduli,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


# ----- recheck ----------------------------------------------------------------------------------

class RecheckFailed(Exception):
    def __init__(self, payload):
        super().__init__("recheck found problems")
        self.payload = payload


class PartialResult(Exception):
    def __init__(self, payload, message):
        super().__init__(message)
        self.payload = payload


def _diff(label, got, want) -> list[str]:
    return [] if got == want else [f"{label}: recomputed {got!r}, artifact says {want!r}"]


def recheck_artifact(data: dict) -> list[str]:
    """Recompute an emitted artifact from its inputs and list every disagreement."""
    kind = data.get("artifact", "certificate" if "verdict" in data else None)
    if kind == "certificate":
        return recheck_certificate(data)
    if kind == "h0":
        sys_ = LinearSystem.from_json(data["system"])
        return _diff("h0", h0_twist(sys_, (data["x"], data["y"]), "exact" if sys_.prime is None else "auto"),
                     data["h0"])
    if kind == "wedge":
        sys_ = LinearSystem.from_json(data["system"])
        got = h0_wedge_twist(sys_, data["q"], (data["x"], data["y"]), "exact" if sys_.prime is None else "auto")
        return _diff("h0", got, data["h0"])
    if kind == "profile":
        sys_ = LinearSystem.from_json(data["system_json"])
        prof = syzygy_profile(sys_, with_mingens="mingens" in data).to_json()
        return [p for key in prof for p in _diff(key, prof[key], data.get(key))]
    if kind == "classify":
        p = data["parameters"]
        got = range_classify(p["m"], p["n"], p["a"], p["b"], p["r"]).to_json()
        return [q for key in got for q in _diff(key, got[key], data.get(key))]
    if kind == "moduli":
        p = data["parameters"]
        got = moduli_tangent_dim(Ambient(p["m"], p["n"]), Polarization(p["a"], p["b"]), p["r"]).to_json()
        return [q for key in got for q in _diff(key, got[key], data.get(key))]
    if kind == "recipe":
        return _recheck_recipe(data)
    if kind == "sweep":
        return _recheck_sweep(data)
    if kind == "report":
        probs = []
        for row in data["rows"]:
            rc = range_classify(data["m"], data["n"], data["a"], data["b"], row["r"])
            probs += _diff(f"class at r={row['r']}", rc.value, row["class"])
        return probs
    if kind == "samples":
        amb, L = Ambient(data["m"], data["n"]), Polarization(data["a"], data["b"])
        probs = []
        support = enumerate_monomials(amb, (L.a, L.b))
        for s in data["samples"]:
            sys_ = random_general_system(amb, L, support, data["r"], s["seed"])
            probs += _diff(f"resample for seed {s['seed']}", sys_.resample, s["resample"])
        return probs
    return [f"unknown artifact kind {kind!r}"]


def _recheck_recipe(data: dict) -> list[str]:
    p = data["parameters"]
    amb, L = Ambient(p["m"], p["n"]), Polarization(p["a"], p["b"])
    probs = _diff("t_r", t_r(p["m"], p["n"], p["a"], p["b"], p["r"]), data["t_r"])
    monos = parse_monomial_list(", ".join(data["monomials"]), amb)
    o_amb, o_L, o_monos = amb, L, monos
    if L.a < L.b:
        o_amb, o_L, o_monos = amb.swapped(), L.swapped(), [u.transposed() for u in monos]
    rep = verify_recipe(o_amb, o_L, o_monos, data["t_r"])
    for key in ("distinct", "pure_powers", "t_min_ok", "bound_met"):
        probs += _diff(key, rep[key], data["verification"][key])
    V = data.get("V", {})
    if "system" in V:
        sys_ = LinearSystem.from_json(V["system"])
        got = certify_degree_gap(sys_).to_json()
        probs += _diff("V degree gap", got, V["degree_gap"])
    return probs


def _recheck_sweep(data: dict) -> list[str]:
    probs = []
    for rec in load_records(Path(data["records"])):
        amb, L = Ambient(rec["m"], rec["n"]), Polarization(rec["a"], rec["b"])
        sys_ = monomial_system(amb, L, rec["support"])
        cert = certify(sys_, data.get("strategy", "gap-then-brute"))
        probs += _diff(f"record {rec['index']} verdict", cert.verdict.to_json(), rec["verdict"])
    return probs


# ----- output -------------------------------------------------------------------------------------

def render_table(out: dict) -> str:
    kind = out.get("artifact")
    if kind == "report":
        return format_report(out["rows"])
    if kind == "certificate":
        v = out["verdict"]
        lines = [f"verdict   {v['kind']} ({v['method']})", f"slope     {out['numerics']['slope']}"]
        if "t_min" in v:
            lines.append(f"t_min     {v['t_min']}")
        if "witness" in v:
            w = v["witness"]
            lines.append(f"witness   q={w['q']} (x,y)=({w['x']},{w['y']}) h0={w['h0']} {w['comparison']}")
        return "\n".join(lines)
    if kind == "profile":
        lines = [f"t_min {out['t_min']}", "  x  y  h0"]
        lines += [f"{x:>3}{y:>3}{h:>4}" for x, y, h in out["table"]]
        return "\n".join(lines)
    width = max((len(k) for k in out), default=0)
    return "\n".join(f"{k:<{width}}  {json.dumps(v, sort_keys=True)}" for k, v in out.items())


def _emit(out: dict, args) -> None:
    text = render_table(out) if args.format == "table" else json.dumps(out, sort_keys=True, indent=2)
    if args.out and args.command not in ("sweep", "report"):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bisyz", description="Syzygy bundles on P^m x P^n.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        for flag in ("m", "n", "a", "b", "r", "q", "x", "y"):
            p.add_argument(f"--{flag}", type=int)
        p.add_argument("--system", help="JSON file or inline list such as \"x0^2 y0, x1^2 y1\"")
        p.add_argument("--out", help="output file (sweep, report: result directory)")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--seed", type=int)
        p.add_argument("--field", default="rational", help="rational or prime:<p>")
        p.add_argument("--strategy", default="gap-then-brute",
                       choices=("degree-gap", "brute-force", "gap-then-brute"))
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--method", default="auto", choices=("auto", "exact", "modp", "count"))
        if name == "tmin":
            p.add_argument("--mingens", action="store_true", help="also list minimal generator degrees")
        if name == "certify":
            p.add_argument("--recheck", help="re-verify an emitted JSON artifact")
            p.add_argument("--assume-bpf", action="store_true",
                           help="proceed when basepoint-freeness is Unknown (recorded in the certificate)")
        if name == "sweep":
            p.add_argument("--max-records", type=int)
            p.add_argument("--time-budget", type=float, help="seconds")
            p.add_argument("--no-symmetry", action="store_true")
            p.add_argument("--fresh", action="store_true", help="ignore an existing checkpoint")
            p.add_argument("--samples", type=int, help="sample generic systems instead of sweeping monomials")
        if name == "report":
            p.add_argument("--no-sweeps", action="store_true")
            p.add_argument("--max-supports", type=int, default=2000)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except RecheckFailed as exc:
        _emit(exc.payload, args)
        return 2
    except PartialResult as exc:
        _emit(exc.payload, args)
        sys.stderr.write(json.dumps({"error": "PartialResult", "message": str(exc)}) + "\n")
        return 2
    except BisyzError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2 if not isinstance(exc, KeyError) else 1
    except Exception as exc:  # pragma: no cover - surfaced as an internal error
        sys.stderr.write(json.dumps({"error": "InternalError", "message": repr(exc)}) + "\n")
        return 1
    _emit(out, args)
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
