"""Empirical checks of the incidence bounds.

Each verifier computes the exact left-hand side and the right-hand side
term by term (with the implied constant set to 1) and reports the ratio.
The ratio is the empirical implied constant; only the harness alarm
threshold turns it into pass/fail.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from ..concentrate import concentration
from ..errors import InputError
from ..geom import VarietySet, set_to_json
from ..incidence import (greedy_k_free, incidence_degree, k_free_check,
                         rich_points, trivial_bound)

THEOREMS = ("i0", "i1", "r", "trivial", "cii", "bezout_suite")
DEFAULT_ALARM = 8.0
RATIO_RTOL = 1e-12

RATIONAL_NOTE = "incidences counted over base-field points only; over the algebraic closure the left side can only grow"


def instance_digest(*sets: VarietySet, extra: dict | None = None) -> str:
    payload = [set_to_json(s) for s in sets]
    if extra:
        payload.append(extra)
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class ExponentSchedule:
    k: int

    def alpha(self, m: int) -> Fraction:
        if m < 0:
            raise InputError("m must be nonnegative")
        if m == 0:
            return Fraction(0)
        return Fraction(self.k, m * (self.k - 1) + 1)

    def concentration_exponent(self, m: int) -> Fraction:
        return Fraction(self.k - 1, self.k) * self.alpha(m)


@dataclass
class VerificationReport:
    theorem: str
    lhs: int
    rhs_terms: list  # [(m, value)]
    params: dict
    instance_digest: str
    concentration: list = dc_field(default_factory=list)  # [(m, value as Fraction)]
    notes: list = dc_field(default_factory=list)

    @property
    def rhs_total(self) -> float:
        return math.fsum(v for _, v in self.rhs_terms)

    @property
    def ratio(self) -> float | None:
        tot = self.rhs_total
        if tot == 0:
            return 0.0 if self.lhs == 0 else None
        return self.lhs / tot

    def breaches(self, alarm: float = DEFAULT_ALARM) -> bool:
        r = self.ratio
        return r is None or r > alarm

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "lhs": self.lhs,
            "rhs_terms": [{"m": m, "value": v} for m, v in self.rhs_terms],
            "rhs_total": self.rhs_total,
            "ratio": self.ratio,
            "params": self.params,
            "concentration": [{"m": m, "value": str(v)} for m, v in self.concentration],
            "instance_digest": self.instance_digest,
            "notes": self.notes,
        }


def _params(t: VarietySet, oracle, k=None, r=None) -> dict:
    return {"k": k, "r": r, "n": t.ambient_dim, "field": str(t.field), "oracle": oracle}


def _oracle_note(oracle):
    return f"containers restricted to flats (oracle: {oracle})"


def verify_i0(s: VarietySet, t: VarietySet, oracle: str = "spanned") -> VerificationReport:
    """I(S,T) against sum_m deg(S)^(1/m) deg(T)^(1-1/m) D_{m+dim S}(T)^(1/m)."""
    inc = incidence_degree(s, t)
    n = t.ambient_dim
    if s.dim is not None:
        d = s.dim
    elif t.dim is not None:
        d = t.dim - 1
    else:
        d = 0
    ds, dt = s.total_degree, t.total_degree
    terms, conc = [], []
    for m in range(1, n - d + 1):
        Dm = concentration(t, m + d, oracle).value if dt else Fraction(0)
        conc.append((m + d, Dm))
        terms.append((m, ds ** (1 / m) * dt ** (1 - 1 / m) * float(Dm) ** (1 / m)))
    return VerificationReport("i0", inc.total, terms, _params(t, oracle), instance_digest(s, t), conc,
                              [RATIONAL_NOTE, _oracle_note(oracle)])


def verify_i1(t: VarietySet, r: int, k: int = 2, oracle: str = "spanned") -> VerificationReport:
    """deg(S) for a greedy k-free S in P_r(T) against deg(T)/r (k^(1/2) + sum_m (D_{m+d}/r)^(1/m))."""
    if r < 2:
        raise InputError("r must be >= 2")
    if t.dim != 1 and t.members:
        raise InputError("rich points are computed for sets of lines")
    rich = rich_points(t, r).points
    s = greedy_k_free(rich, t, k) if len(rich) else rich
    n, d = t.ambient_dim, (t.dim or 1)
    dt = t.total_degree
    scale = dt / r
    terms = [(0, scale * math.sqrt(k))]
    conc = []
    for m in range(1, n - d + 1):
        Dm = concentration(t, m + d, oracle).value if dt else Fraction(0)
        conc.append((m + d, Dm))
        terms.append((m, scale * (float(Dm) / r) ** (1 / m)))
    notes = [RATIONAL_NOTE, _oracle_note(oracle),
             f"S = greedy maximal {k}-free subset of P_{r}(T) ({len(rich)} rich points, {len(s)} kept)"]
    return VerificationReport("i1", s.total_degree, terms, _params(t, oracle, k, r),
                              instance_digest(t, extra={"r": r, "k": k}), conc, notes)


def verify_r(s: VarietySet, t: VarietySet, k: int = 2, oracle: str = "spanned") -> VerificationReport:
    """I(S,T) against sum_{m=0..n} k^(1-a) |S|^a deg(T)^(1-a) D_m^((k-1)a/k), a = alpha(k, m)."""
    if not t.field.kind == "rational":
        raise InputError("the real-coordinate bound is checked over Q only")
    if k < 2:
        raise InputError("k must be >= 2")
    if s.dim not in (None, 0) or t.dim not in (None, 1):
        raise InputError("expects a point set S and a set of lines T")
    free = k_free_check(s, t, k)
    if not free.ok:
        a, b = free.pair
        pts = ", ".join(str(x) for x in free.shared)
        raise InputError(f"S is not {k}-free: {pts} lie on both {a} and {b}")
    inc = incidence_degree(s, t)
    sched = ExponentSchedule(k)
    n = t.ambient_dim
    ns, dt = len(s), t.total_degree
    terms, conc = [], []
    for m in range(0, n + 1):
        a = float(sched.alpha(m))
        if m == 0:
            terms.append((0, float(k * dt)))
            continue
        Dm = concentration(t, m, oracle).value if dt and m >= (t.dim or 1) else Fraction(0)
        conc.append((m, Dm))
        terms.append((m, k ** (1 - a) * ns ** a * dt ** (1 - a) * float(Dm) ** float(sched.concentration_exponent(m))))
    notes = [RATIONAL_NOTE, _oracle_note(oracle),
             "Q-coordinates stand in for R; only the final inequality is checked"]
    return VerificationReport("r", inc.total, terms, _params(t, oracle, k), instance_digest(s, t, extra={"k": k}),
                              conc, notes)


def verify_trivial(s: VarietySet, t: VarietySet, k: int) -> VerificationReport:
    """I(S,T) against 2|S||T|^(1-1/k) + (k-1)|T| for k-free S."""
    free = k_free_check(s, t, k)
    if not free.ok:
        raise InputError(f"S is not {k}-free")
    inc = incidence_degree(s, t)
    ns, nt = len(s), len(t)
    terms = [(1, 2 * ns * nt ** (1 - 1 / k)), (0, float((k - 1) * nt))]
    assert math.isclose(math.fsum(v for _, v in terms), trivial_bound(ns, nt, k), rel_tol=RATIO_RTOL)
    return VerificationReport("trivial", inc.total, terms, _params(t, None, k), instance_digest(s, t, extra={"k": k}),
                              [], [RATIONAL_NOTE])
