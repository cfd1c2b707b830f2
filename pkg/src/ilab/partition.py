"""Polynomial splitting of (S, T) with exact incidence bookkeeping.

One step with a polynomial f splits T into T_f (members inside Z(f)) and
the rest, and S likewise.  Points of S_f can meet members of T outside
Z(f) only in Z(f) itself, at most deg(f) times per member, so

    I(S,T) <= I(S_f,T_f) + I(S - S_f, T - T_f) + deg(T - T_f) * deg(f).

``partition_iterate`` keeps splitting the largest piece with polynomials
found by ``good_partition_search`` until no piece admits a good split.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

from .concentrate import spanned_candidates
from .errors import InputError, VerificationError
from .geom import AffineObject, VarietySet, contains
from .incidence import incidence_degree
from .mpoly import MultiPoly, vanishes_on
from .vanish import min_vanishing_degree, vanishing_poly

# pieces of total degree <= FLOOR are never split
FLOOR = 2
RANDOM_ATTEMPTS = 16
KERNEL_PROBES = 8


@dataclass
class PartitionStep:
    f: MultiPoly
    s_in: VarietySet
    s_out: VarietySet
    t_in: VarietySet
    t_out: VarietySet
    error_term: int
    lhs: int  # I(S, T)
    inside: int  # I(S_f, T_f)
    outside: int  # I(S - S_f, T - T_f)
    piece: int | None = None
    children: tuple = ()

    @property
    def rhs(self) -> int:
        return self.inside + self.outside + self.error_term

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs


def _degree(f: MultiPoly) -> int:
    return max(f.total_degree, 0)


def cii_step(s: VarietySet, t: VarietySet, f: MultiPoly) -> PartitionStep:
    """Split by containment in Z(f) and evaluate both sides exactly."""
    if f.field != t.field or f.nvars != t.ambient_dim:
        raise InputError("polynomial and configuration live in different spaces")
    s_in_l, s_out_l = [], []
    for x in s:
        (s_in_l if vanishes_on(f, x) else s_out_l).append(x)
    t_in_l, t_out_l = [], []
    for y in t:
        (t_in_l if vanishes_on(f, y) else t_out_l).append(y)
    s_in, s_out = s.subset(s_in_l), s.subset(s_out_l)
    t_in, t_out = t.subset(t_in_l), t.subset(t_out_l)
    err = t_out.total_degree * _degree(f)
    step = PartitionStep(
        f, s_in, s_out, t_in, t_out, err,
        incidence_degree(s, t).total,
        incidence_degree(s_in, t_in).total,
        incidence_degree(s_out, t_out).total,
    )
    return step


def _is_good(t: VarietySet, f: MultiPoly, tau: float) -> bool:
    inside = sum(y.degree for y in t if vanishes_on(f, y))
    return tau * t.total_degree < inside < t.total_degree


def _candidate_subsets(t: VarietySet, tau: float, D: int, seed: int):
    """Concentration witnesses first (largest T_W), then seeded random tau-fraction subsets."""
    n = t.ambient_dim
    seen = set()
    lo = (t.dim or 0) + 1
    for m in range(lo, n):
        for w, c in spanned_candidates(t, m):
            if 0 < c < len(t):
                key = frozenset(y for y in t if contains(w, y))
                if key not in seen:
                    seen.add(key)
                    yield sorted(key, key=AffineObject.key)
    rng = random.Random(f"{seed}:{D}:{len(t)}")
    size = min(len(t) - 1, math.floor(tau * t.total_degree) + 1)
    if size <= 0:
        return
    members = list(t.members)
    for _ in range(RANDOM_ATTEMPTS):
        pick = frozenset(rng.sample(members, size))
        if pick not in seen:
            seen.add(pick)
            yield sorted(pick, key=AffineObject.key)


def good_partition_search(t: VarietySet, tau: float, budget: int, seed: int = 0) -> MultiPoly | None:
    """f with deg f <= budget and tau*deg(T) < deg(T_f) < deg(T), or None."""
    if not 0 < tau < 1:
        raise InputError("tau must lie strictly between 0 and 1")
    if budget < 1:
        raise InputError("degree budget must be >= 1")
    if t.total_degree <= 1:
        return None
    for D in range(1, budget + 1):
        for subset in _candidate_subsets(t, tau, D, seed):
            res = vanishing_poly(t.subset(subset), D)
            for vec in res.kernel[:KERNEL_PROBES]:
                f = MultiPoly.from_vector(t.field, t.ambient_dim, D, vec)
                if _is_good(t, f, tau):
                    return f
    return None


@dataclass
class Piece:
    id: int
    s: VarietySet
    t: VarietySet
    final: bool = False
    parent: int | None = None


@dataclass
class PartitionTrace:
    pieces: list
    steps: list
    total_error: int
    budget: str
    lhs: int  # I(S, T) of the input
    tau: float
    all_pieces: list = dc_field(default_factory=list)

    @property
    def pieces_incidence(self) -> int:
        return sum(incidence_degree(p.s, p.t).total for p in self.pieces)

    @property
    def holds(self) -> bool:
        return self.pieces_incidence + self.total_error >= self.lhs


def _piece_order(p: Piece):
    return (-p.t.total_degree, tuple(y.key() for y in sorted(p.t, key=AffineObject.key)))


def partition_iterate(s: VarietySet, t: VarietySet, tau: float, budget_rule="relative",
                      seed: int = 0, floor: int = FLOOR) -> PartitionTrace:
    """Split the largest live piece until none admits a good partition.

    ``budget_rule`` is ``"relative"`` (min vanishing degree of the piece) or an
    int (fixed degree cap).
    """
    if budget_rule != "relative" and not (isinstance(budget_rule, int) and budget_rule >= 1):
        raise InputError(f"budget must be 'relative' or a positive int, got {budget_rule!r}")
    lhs = incidence_degree(s, t).total
    root = Piece(0, s, t)
    live = [root]
    history = [root]
    steps = []
    next_id = 1
    while True:
        open_ = [p for p in live if not p.final and p.t.total_degree > floor]
        if not open_:
            break
        piece = min(open_, key=_piece_order)
        if budget_rule == "relative":
            budget = min_vanishing_degree(piece.t).degree
        else:
            budget = budget_rule
        f = good_partition_search(piece.t, tau, budget, seed) if budget >= 1 else None
        if f is None:
            piece.final = True
            continue
        step = cii_step(piece.s, piece.t, f)
        if not step.holds:
            raise VerificationError(f"split inequality failed: {step.lhs} > {step.rhs} for f = {f}")
        a = Piece(next_id, step.s_in, step.t_in, parent=piece.id)
        b = Piece(next_id + 1, step.s_out, step.t_out, parent=piece.id)
        next_id += 2
        step.piece = piece.id
        step.children = (a.id, b.id)
        steps.append(step)
        live = [p for p in live if p is not piece] + [a, b]
        history += [a, b]
    for p in live:
        p.final = True
    trace = PartitionTrace(live, steps, sum(st.error_term for st in steps),
                           str(budget_rule), lhs, tau, history)
    if not trace.holds:
        raise VerificationError("global partition inequality failed")
    return trace
