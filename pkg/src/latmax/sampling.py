"""Seeded random small representations for the count-bound and hull suites."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .config import JobSpec
from .errors import CapExceeded, DiameterError, PrecisionError, SpecError

FIXTURE_MATRICES = {
    2: [((0, -1), (1, -1)), ((-1, 1), (0, 1))],
    3: [((-1, 1, 0), (0, 1, 0), (0, 0, 1)), ((0, 0, -1), (1, 0, -1), (0, 1, -1))],
}


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 20240611
    accepted: int = 50
    max_tries: int = 400
    primes: tuple = (2, 3)
    dims: tuple = (2, 3)
    precision: int = 16
    max_diameter: int = 4
    max_vertices: int = 40
    entry_bound: int = 2


def _matmul(a, b):
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in zip(*b)) for r in a)


def _unimodular(rng: random.Random, n: int, bound: int):
    m = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for _ in range(2 * n + 1):
        i, j = rng.sample(range(n), 2)
        e = [[int(a == b) for b in range(n)] for a in range(n)]
        e[i][j] = rng.randint(-bound, bound)
        m = _matmul(m, e)
    signs = [[(rng.choice((1, -1)) if a == b else 0) for b in range(n)] for a in range(n)]
    return _matmul(m, signs)


def _triangular_plus_p(rng: random.Random, n: int, p: int, bound: int):
    """Upper triangular with unit diagonal mod p, plus p times a random matrix."""
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                base = 0
            elif j == i:
                base = rng.choice([u for u in range(1, p)] + [-1])
            else:
                base = rng.randint(-bound, bound)
            row.append(base + p * rng.randint(-1, 1))
        out.append(tuple(row))
    return tuple(out)


def _inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        pr = next(i for i in range(c, n) if a[i][c])
        a[c], a[pr] = a[pr], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def _conjugated_fixture(rng: random.Random, n: int, p: int, bound: int):
    c = _matmul(_unimodular(rng, n, bound), tuple(
        tuple((p ** rng.randint(0, 1) if i == j else 0) for j in range(n)) for i in range(n)))
    ci = _inverse(c)
    return [_matmul(_matmul(c, g), ci) for g in FIXTURE_MATRICES[n]]


def _entry(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def random_spec(rng: random.Random, cfg: SampleConfig) -> JobSpec:
    p = rng.choice(cfg.primes)
    n = rng.choice(cfg.dims)
    family = rng.choice(("unimodular", "triangular", "conjugate"))
    if family == "unimodular":
        gens = [_unimodular(rng, n, cfg.entry_bound) for _ in range(2)]
    elif family == "triangular":
        gens = [_triangular_plus_p(rng, n, p, cfg.entry_bound) for _ in range(2)]
    else:
        gens = _conjugated_fixture(rng, n, p, 1)
    gens = tuple(tuple(tuple(_entry(x) for x in r) for r in g) for g in gens)
    return JobSpec(p=p, generators=gens, labels=("a", "b"), precision=cfg.precision,
                   max_diameter=cfg.max_diameter, max_vertices=cfg.max_vertices,
                   name=f"random {family} p={p} n={n}")


def accepted_instances(cfg: SampleConfig = SampleConfig(), analyse=None):
    """Yield (spec, result) for instances that stay inside the guards.

    ``analyse`` maps a JobSpec to a result and may raise the guard errors,
    which cause the instance to be discarded. Stops after ``cfg.accepted``.
    """
    from .analysis import analyze_spec

    analyse = analyse or analyze_spec
    rng = random.Random(cfg.seed)
    got = 0
    for _ in range(cfg.max_tries):
        spec = random_spec(rng, cfg)
        try:
            res = analyse(spec)
        except (DiameterError, PrecisionError, CapExceeded, SpecError):
            continue
        yield spec, res
        got += 1
        if got >= cfg.accepted:
            return
