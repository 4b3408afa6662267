"""Job specifications: the JSON documents the command line consumes."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .arith import FLAVORS, is_prime
from .errors import SpecError
from .modrep import DEFAULT_CAP

DEFAULT_PRECISION = 16
DEFAULT_MAX_DIAMETER = 16
DEFAULT_MAX_VERTICES = 5000


@dataclass(frozen=True)
class JobSpec:
    p: int
    generators: tuple
    labels: tuple
    precision: int = DEFAULT_PRECISION
    flavor: str = "p-adic"
    max_diameter: int = DEFAULT_MAX_DIAMETER
    enumeration_cap: int = DEFAULT_CAP
    max_vertices: int = DEFAULT_MAX_VERTICES
    name: str = ""
    sha256: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def with_overrides(self, **kw) -> "JobSpec":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def reordered(self, perm) -> "JobSpec":
        return replace(self, generators=tuple(self.generators[i] for i in perm),
                       labels=tuple(self.labels[i] for i in perm))

    def caps_json(self) -> dict:
        return {
            "max_diameter": self.max_diameter,
            "enumeration_cap": self.enumeration_cap,
            "max_vertices": self.max_vertices,
        }


def _fraction_det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def _entry(x, flavor: str, where: str):
    if flavor == "p-adic":
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise SpecError(f"{where}: expected an integer or an 'a/b' string, got {x!r}")
        try:
            return Fraction(x) if isinstance(x, str) else x
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{where}: not a rational number: {x!r}") from exc
    if isinstance(x, bool):
        raise SpecError(f"{where}: expected a coefficient list, got {x!r}")
    if isinstance(x, int):
        return [x]
    if isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x):
        return list(x)
    if isinstance(x, dict) and set(x) <= {"coeffs", "shift"} and "coeffs" in x:
        coeffs = x["coeffs"]
        if not isinstance(coeffs, list) or not all(isinstance(c, int) for c in coeffs):
            raise SpecError(f"{where}.coeffs: expected a list of integers")
        if not isinstance(x.get("shift", 0), int):
            raise SpecError(f"{where}.shift: expected an integer")
        return {"coeffs": list(coeffs), "shift": x.get("shift", 0)}
    raise SpecError(f"{where}: expected a coefficient list or {{coeffs, shift}}, got {x!r}")


def _positive_int(doc, key, default):
    v = doc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise SpecError(f"field '{key}': expected a positive integer, got {v!r}")
    return v


def spec_from_dict(doc, sha: str = "") -> JobSpec:
    if not isinstance(doc, dict):
        raise SpecError("top level: expected a JSON object")
    known = {"p", "precision", "flavor", "generators", "max_diameter", "enumeration_cap",
             "max_vertices", "name", "description"}
    extra = sorted(set(doc) - known)
    if extra:
        raise SpecError(f"unknown field(s): {', '.join(extra)}")
    if "p" not in doc:
        raise SpecError("missing required field 'p'")
    p = doc["p"]
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise SpecError(f"field 'p': expected a prime, got {p!r}")
    flavor = doc.get("flavor", "p-adic")
    if flavor not in FLAVORS:
        raise SpecError(f"field 'flavor': expected one of {FLAVORS}, got {flavor!r}")
    if "generators" not in doc:
        raise SpecError("missing required field 'generators'")
    raw = doc["generators"]
    if not isinstance(raw, list) or not raw:
        raise SpecError("field 'generators': expected a non-empty list")
    gens, labels = [], []
    n = None
    for gi, g in enumerate(raw):
        where = f"generators[{gi}]"
        if isinstance(g, dict):
            if "matrix" not in g:
                raise SpecError(f"{where}: missing field 'matrix'")
            label = g.get("label", f"g{gi}")
            if not isinstance(label, str) or not label:
                raise SpecError(f"{where}.label: expected a non-empty string")
            rows = g["matrix"]
            where += ".matrix"
        else:
            label, rows = f"g{gi}", g
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise SpecError(f"{where}: expected a list of rows")
        if n is None:
            n = len(rows)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise SpecError(f"{where}: expected a square {n}x{n} matrix")
        mat = tuple(tuple(_entry(x, flavor, f"{where}[{i}][{j}]") for j, x in enumerate(r))
                    for i, r in enumerate(rows))
        if flavor == "p-adic" and _fraction_det(mat) == 0:
            raise SpecError(f"{where}: generator is not invertible (determinant 0)")
        gens.append(mat)
        labels.append(label)
    if len(set(labels)) != len(labels):
        raise SpecError("field 'generators': labels must be distinct")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SpecError("field 'name': expected a string")
    return JobSpec(
        p=p,
        generators=tuple(gens),
        labels=tuple(labels),
        precision=_positive_int(doc, "precision", DEFAULT_PRECISION),
        flavor=flavor,
        max_diameter=_positive_int(doc, "max_diameter", DEFAULT_MAX_DIAMETER),
        enumeration_cap=_positive_int(doc, "enumeration_cap", DEFAULT_CAP),
        max_vertices=_positive_int(doc, "max_vertices", DEFAULT_MAX_VERTICES),
        name=name,
        sha256=sha,
    )


def parse_spec(source) -> JobSpec:
    """Parse a path, a JSON string or an already-decoded mapping."""
    if isinstance(source, dict):
        text = json.dumps(source, sort_keys=True)
        return spec_from_dict(source, hashlib.sha256(text.encode()).hexdigest())
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec: {exc}") from exc
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return spec_from_dict(doc, hashlib.sha256(text.encode()).hexdigest())
