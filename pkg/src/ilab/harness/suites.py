"""Seeded random suites for the splitting inequality and the line/hypersurface bound.

Instance distribution for the splitting suite (per instance index i, seeded
by ``(seed, i)``):

* n uniform in ``dims``, p uniform in ``primes``;
* T: 1..max_lines lines, a mix of free random lines, bundles through shared
  hubs and lines inside one random hyperplane;
* S: up to max_points points, drawn from hubs, points on lines of T and
  uniform random points;
* f: degree 0..max_degree, one of a dense random polynomial, a product of
  random linear forms (the hyperplane's form included half the time), or a
  kernel polynomial vanishing on a random subset of T.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from ..exactfield import FieldSpec
from ..geom import AffineObject, VarietySet
from ..incidence import bezout_line_check
from ..mpoly import MultiPoly, monomial_basis
from ..partition import cii_step
from ..vanish import vanishing_poly


def _vec(rng, F, n):
    if F.is_prime:
        return [rng.randrange(F.p) for _ in range(n)]
    return [rng.randint(-9, 9) for _ in range(n)]


def _nonzero(rng, F, n):
    while True:
        v = _vec(rng, F, n)
        if any(F(x) for x in v):
            return v


def random_poly(rng, F: FieldSpec, n: int, D: int, density: float = 1.0) -> MultiPoly:
    terms = {}
    for e in monomial_basis(n, D):
        if rng.random() < density:
            terms[e] = _vec(rng, F, 1)[0]
    if D > 0:
        # keep the top degree populated
        top = [e for e in monomial_basis(n, D) if sum(e) == D]
        terms[rng.choice(top)] = _nonzero(rng, F, 1)[0]
    return MultiPoly.from_terms(F, n, terms)


def product_of_linear_forms(rng, F, n, D, first=None) -> MultiPoly:
    f = MultiPoly.constant(F, n, _nonzero(rng, F, 1)[0])
    forms = [first] if first is not None and D > 0 else []
    while len(forms) < D:
        forms.append(MultiPoly.linear(F, _nonzero(rng, F, n), _vec(rng, F, 1)[0]))
    for g in forms:
        f = f * g
    return f


def random_cii_instance(rng, F: FieldSpec, n: int, max_points=30, max_lines=30, max_degree=4):
    """One (S, T, f) triple from the documented mixture."""
    hubs = [_vec(rng, F, n) for _ in range(rng.randint(1, 3))]
    normal = _nonzero(rng, F, n)
    anchor = _vec(rng, F, n)
    const = sum(F(a) * F(b) for a, b in zip(normal, anchor))
    plane = MultiPoly.linear(F, normal, -const)

    def in_plane_dir():
        # random direction orthogonal to the hyperplane normal
        while True:
            v = _vec(rng, F, n)
            dot = F(sum(F(a) * F(b) for a, b in zip(v, normal)))
            i = next(j for j, c in enumerate(normal) if F(c))
            v[i] = F.sub(F(v[i]), F.div(dot, F(normal[i])))
            if any(F(x) for x in v):
                return v

    lines = set()
    want = rng.randint(1, max_lines)
    tries = 0
    while len(lines) < want and tries < 20 * max_lines:
        tries += 1
        kind = rng.random()
        if kind < 0.35:
            ln = AffineObject.line(F, _vec(rng, F, n), _nonzero(rng, F, n))
        elif kind < 0.7:
            ln = AffineObject.line(F, rng.choice(hubs), _nonzero(rng, F, n))
        else:
            ln = AffineObject.line(F, anchor, in_plane_dir()) if rng.random() < 0.3 else \
                AffineObject.line(F, _plane_point(rng, F, n, normal, const), in_plane_dir())
        lines.add(ln)
    T = VarietySet.of(F, n, sorted(lines, key=AffineObject.key))

    pts = set()
    want = rng.randint(0, max_points)
    tries = 0
    while len(pts) < want and tries < 20 * max_points:
        tries += 1
        kind = rng.random()
        if kind < 0.2:
            pts.add(AffineObject.point(F, rng.choice(hubs)))
        elif kind < 0.8 and T.members:
            ln = rng.choice(T.members)
            pts.add(AffineObject.point(F, ln.point_at([_vec(rng, F, 1)[0]])))
        else:
            pts.add(AffineObject.point(F, _vec(rng, F, n)))
    S = VarietySet.of(F, n, sorted(pts, key=AffineObject.key))

    D = rng.randint(0, max_degree)
    kind = rng.random()
    if kind < 0.3:
        f = random_poly(rng, F, n, D, density=rng.choice([0.2, 0.5, 1.0]))
    elif kind < 0.65:
        f = product_of_linear_forms(rng, F, n, D, first=plane if rng.random() < 0.5 else None)
    else:
        f = None
        if T.members and D > 0:
            k = rng.randint(1, len(T))
            sub = T.subset(rng.sample(list(T.members), k))
            res = vanishing_poly(sub, D)
            f = res.polynomial
        if f is None:
            f = product_of_linear_forms(rng, F, n, D, first=plane)
    return S, T, f


def _plane_point(rng, F, n, normal, const):
    x = _vec(rng, F, n)
    i = next(j for j, c in enumerate(normal) if F(c))
    rest = sum(F(a) * F(b) for j, (a, b) in enumerate(zip(normal, x)) if j != i)
    x[i] = F.div(F.sub(F(const), F(rest)), F(normal[i]))
    return x


@dataclass
class SuiteSummary:
    name: str
    instances: int = 0
    violations: int = 0
    equalities: int = 0
    min_slack: int | None = None
    max_slack: int | None = None
    slack_sum: int = 0
    reproducers: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    def record(self, slack: int, ok: bool, reproducer: dict):
        self.instances += 1
        if not ok:
            self.violations += 1
            self.reproducers.append(reproducer)
        if slack == 0:
            self.equalities += 1
        self.slack_sum += slack
        self.min_slack = slack if self.min_slack is None else min(self.min_slack, slack)
        self.max_slack = slack if self.max_slack is None else max(self.max_slack, slack)

    def to_json(self) -> dict:
        mean = self.slack_sum / self.instances if self.instances else None
        return {"suite": self.name, "instances": self.instances, "violations": self.violations,
                "equalities": self.equalities, "min_slack": self.min_slack, "max_slack": self.max_slack,
                "mean_slack": mean, "reproducers": self.reproducers, **self.extra}


def verify_cii_suite(instances: int, seed: int, dims=(2, 3), primes=(7, 11), max_points=30,
                     max_lines=30, max_degree=4) -> SuiteSummary:
    """Exact check of the splitting inequality on seeded random instances."""
    out = SuiteSummary("cii")
    for i in range(instances):
        rng = random.Random(f"cii:{seed}:{i}")
        n = rng.choice(list(dims))
        F = FieldSpec.prime(rng.choice(list(primes)))
        S, T, f = random_cii_instance(rng, F, n, max_points, max_lines, max_degree)
        st = cii_step(S, T, f)
        out.record(st.slack, st.holds, {"seed": seed, "index": i, "n": n, "p": F.p})
    return out


def verify_bezout_suite(pairs: int, seed: int, primes=(5, 7, 11, 13), dims=(2, 3, 4), max_degree=5,
                        rational_share: float = 0.1) -> SuiteSummary:
    """Line vs hypersurface: base-field intersection count <= deg f unless contained.

    Slack is deg f minus the count; contained pairs are tallied separately.
    """
    out = SuiteSummary("bezout")
    contained = 0
    for i in range(pairs):
        rng = random.Random(f"bezout:{seed}:{i}")
        n = rng.choice(list(dims))
        F = FieldSpec.rational() if rng.random() < rational_share else FieldSpec.prime(rng.choice(list(primes)))
        D = rng.randint(1, max_degree)
        ln = AffineObject.line(F, _vec(rng, F, n), _nonzero(rng, F, n))
        kind = rng.random()
        if kind < 0.4:
            f = random_poly(rng, F, n, D, density=rng.choice([0.3, 1.0]))
        elif kind < 0.85:
            # forms vanishing at chosen points of the line give many roots
            f = MultiPoly.constant(F, n, 1)
            for _ in range(D):
                c = F(_vec(rng, F, 1)[0])
                x = ln.point_at([c])
                a = _nonzero(rng, F, n)
                f = f * MultiPoly.linear(F, a, -sum(F(u) * F(v) for u, v in zip(a, x)))
        else:
            # first factor contains the line
            d = ln.direction
            a = _nonzero(rng, F, n)
            i0 = next(j for j, c in enumerate(d) if c)
            dot = sum(F(u) * F(v) for u, v in zip(a, d))
            a[i0] = F.sub(F(a[i0]), F.div(F(dot), d[i0]))
            if not any(F(x) for x in a):
                a = [F.zero] * n
                a[(i0 + 1) % n] = F.one
            form = MultiPoly.linear(F, a, -sum(F(u) * F(v) for u, v in zip(a, ln.base)))
            f = form * random_poly(rng, F, n, D - 1, density=0.5) if D > 1 else form
        res = bezout_line_check(ln, f)
        if res.contained:
            contained += 1
            continue
        out.record(res.degree - res.count, res.holds, {"seed": seed, "index": i, "n": n, "field": str(F)})
    out.extra["contained"] = contained
    out.extra["pairs"] = pairs
    return out
