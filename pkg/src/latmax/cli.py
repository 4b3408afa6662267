"""Command line entry point: ``latmax analyze|complex|graph|maximal|check <spec>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import analyze_checked, failed_verdicts, strip_precision
from .config import parse_spec
from .errors import LatmaxError, PrecisionError, SpecError, VerdictFailure
from .lattice import load_representation, normalise_at
from .maxlat import ascend_to_maximal, is_maximal_at

EXIT_OK = 0


def complex_dot(report: dict) -> str:
    cx = report["complex"]
    lines = ["graph X {", "  node [shape=circle];"]
    for v in cx["vertices"]:
        flags = "".join(f for f, on in (("M", v["maximal"]), ("E", v["extremal"])) if on)
        soc = "+".join(v["socle"])
        shape = "doublecircle" if v["maximal"] else "circle"
        lines.append(f'  v{v["index"]} [label="{v["index"]}\\nsoc={soc}\\n{flags}", shape={shape}];')
    for a, b in cx["edges"]:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_dot(report: dict) -> str:
    g = report["ribet"]["graph"]
    lines = ["digraph Gamma {"]
    for i, n in enumerate(g["nodes"]):
        lines.append(f'  n{i} [label="{n}"];')
    idx = {n: i for i, n in enumerate(g["nodes"])}
    for e in g["edges"]:
        w = ",".join(str(k) for k in e["witnesses"])
        lines.append(f'  n{idx[e["from"]]} -> n{idx[e["to"]]} [label="x{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_vector(text: str) -> list:
    parts = [t.strip() for t in text.split(",")]
    try:
        return [int(t) if "/" not in t else t for t in parts]
    except ValueError as exc:
        raise SpecError(f"--vector: cannot parse {text!r}") from exc


def _maximal(spec, vector_text: str, extra: int = 4) -> dict:
    runs = []
    for n in (spec.precision, spec.precision + extra):
        rep, base = load_representation(spec.with_overrides(precision=n))
        v = rep.vector(_parse_vector(vector_text))
        start = normalise_at(base, v)
        trace = []
        top = ascend_to_maximal(start, v, trace)
        runs.append({
            "start_shift": start.shift,
            "trace": [{"key": t.key.to_json(), "shift": t.shift} for t in trace],
            "vertex": top.key.to_json(),
            "shift": top.shift,
            "maximal_at_vector": is_maximal_at(top, v),
        })
    out = dict(runs[0])
    out["job"] = {"spec_sha256": spec.sha256, "precision": spec.precision, "caps": spec.caps_json()}
    out["precision_check"] = {"precisions": [spec.precision, spec.precision + extra], "agree": runs[0] == runs[1]}
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latmax", description="Stable lattices, maximal vertices and extension graphs.")
    ap.add_argument("command", choices=["analyze", "complex", "graph", "maximal", "check"])
    ap.add_argument("spec", help="path to a JSON job document")
    ap.add_argument("--out", help="write the artifact here instead of stdout")
    ap.add_argument("--precision", type=int, help="override the working precision N")
    ap.add_argument("--max-diameter", type=int, help="override the diameter guard")
    ap.add_argument("--vector", help='comma separated entries, e.g. "1,0" (maximal only)')
    ap.add_argument("--workers", type=int, default=1, help="threads for the vertex search")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_spec(args.spec).with_overrides(precision=args.precision, max_diameter=args.max_diameter)
        if spec.precision < 4:
            raise SpecError("precision must be at least 4")
        if args.command == "maximal":
            if not args.vector:
                raise SpecError("maximal needs --vector")
            res = _maximal(spec, args.vector)
            _emit(_dump(res), args.out)
            if not res["precision_check"]["agree"]:
                raise PrecisionError("results differ between N and N+4")
            return EXIT_OK
        a = analyze_checked(spec, args.workers)
        report = a.report
        if args.command == "analyze":
            _emit(_dump(report), args.out)
        elif args.command == "complex":
            _emit(complex_dot(report), args.out)
        elif args.command == "graph":
            _emit(graph_dot(report), args.out)
        else:
            summary = {"verdicts": report["verdicts"], "precision_check": report["precision_check"]}
            _emit(_dump(summary), args.out)
        if not report["precision_check"]["agree"]:
            raise PrecisionError("reports differ between N and N+4")
        failed = failed_verdicts(report)
        if failed:
            raise VerdictFailure("failed verdicts: " + ", ".join(failed))
        return EXIT_OK
    except LatmaxError as exc:
        print(f"latmax: {exc}", file=sys.stderr)
        return exc.exit_code
    except AssertionError as exc:
        # internal cross-checks failing count as verdict failures
        print(f"latmax: internal check failed: {exc}", file=sys.stderr)
        return VerdictFailure.exit_code


def main(argv=None):
    sys.exit(run(argv))


__all__ = ["complex_dot", "graph_dot", "main", "run", "strip_precision"]
