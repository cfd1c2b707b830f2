"""Minimum-degree vanishing polynomials by parameter counting, and relative degrees.

A degree-<=D polynomial is a coefficient vector over ``monomial_basis(n, D)``.
Vanishing at a point is one linear condition; vanishing on a line is D+1
conditions (every coefficient of the restriction).  Whenever
``C(D+n, n)`` exceeds the number of conditions the kernel is nonzero.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import InputError, NoSeparationError, VerificationError
from .exactfield import Matrix, kernel_from_rref, rref_rows, solve_rank_compare
from .geom import AffineObject, VarietySet
from .mpoly import (MultiPoly, flat_vanishing_rows, monomial_count, vanishes_on,
                    vanishing_rows)

# ceiling on the degree sweep when parameter counting can never succeed
FALLBACK_MAX_DEGREE = 12
# combination sweep: coefficients 0..COMBO_RANGE-1 on the first COMBO_WIDTH basis vectors
COMBO_RANGE = 4
COMBO_WIDTH = 4


@dataclass
class VanishResult:
    degree: int
    polynomial: MultiPoly | None
    kernel_dim: int
    constraint_count: int
    monomial_count: int
    rank: int
    kernel: list = dc_field(default_factory=list, repr=False)

    @property
    def present(self) -> bool:
        return self.polynomial is not None


@dataclass
class RelativeDegreeResult:
    degree: int
    witness: MultiPoly
    avoided: list
    kernel_dim: int


def constraint_count(members: Sequence[AffineObject], D: int) -> int:
    total = 0
    for o in members:
        total += monomial_count(o.dim, D) if o.dim else 1
    return total


def counting_bound(members: Sequence[AffineObject], n: int, dim: int | None = None) -> int | None:
    """Smallest D with C(D+dim, dim) > #conditions (dim defaults to n)."""
    dim = n if dim is None else dim
    for D in range(0, 4096):
        if monomial_count(dim, D) > constraint_count(members, D):
            return D
        if any(o.dim >= dim for o in members) and D > FALLBACK_MAX_DEGREE:
            return None
    return None


def _check_members(ts: VarietySet):
    for o in ts:
        if o.dim > 1:
            raise InputError(f"vanishing_poly supports points and lines, got a {o.dim}-flat")


def _rows(members, D):
    rows = []
    for o in members:
        rows.extend(vanishing_rows(o, D))
    return rows


def vanishing_poly(ts: VarietySet, D: int) -> VanishResult:
    """A nonzero polynomial of degree <= D vanishing on every member, if one exists."""
    if D < 0:
        raise InputError("degree must be nonnegative")
    _check_members(ts)
    F, n = ts.field, ts.ambient_dim
    N = monomial_count(n, D)
    rows = _rows(ts.members, D)
    red, piv = rref_rows(F, rows, N)
    kernel = kernel_from_rref(F, red, piv, N)
    poly = MultiPoly.from_vector(F, n, D, kernel[0]) if kernel else None
    if poly is not None:
        bad = next((o for o in ts if not vanishes_on(poly, o)), None)
        if bad is not None:
            raise VerificationError(f"kernel polynomial {poly} does not vanish on {bad}")
    return VanishResult(D, poly, len(kernel), len(rows), N, len(piv), kernel)


def min_vanishing_degree(ts: VarietySet) -> VanishResult:
    """First D = 0, 1, ... at which a vanishing polynomial exists."""
    _check_members(ts)
    bound = counting_bound(ts.members, ts.ambient_dim)
    if bound is None:
        raise InputError("members fill the ambient space; only the zero polynomial vanishes on them")
    for D in range(bound + 1):
        res = vanishing_poly(ts, D)
        if res.present:
            return res
    raise VerificationError(f"no vanishing polynomial up to the counting bound {bound}")


def _nonzero_everywhere(cons, vec) -> bool:
    return all(any(c for c in m.apply(vec)) for m in cons)


def _combos(F, kernel):
    width = min(len(kernel), COMBO_WIDTH)
    top = COMBO_RANGE if not F.is_prime else min(F.p, COMBO_RANGE)
    for coefs in itertools.product(range(top), repeat=width):
        if sum(1 for c in coefs if c) < 2:
            continue
        vec = [F.zero] * len(kernel[0])
        for c, v in zip(coefs, kernel):
            if c:
                c = F(c)
                vec = [F.add(a, F.mul(c, b)) for a, b in zip(vec, v)]
        yield tuple(vec)


def relative_degree(xs: VarietySet, ws: Sequence[AffineObject], max_degree: int | None = None) -> RelativeDegreeResult:
    """Smallest D admitting f with X in Z(f) and f not identically zero on any avoided flat."""
    F, n = xs.field, xs.ambient_dim
    ws = list(ws)
    for w in ws:
        if w.field != F or w.ambient_dim != n:
            raise InputError(f"avoided flat {w} is not in {F}^{n}")
    members = list(xs.members)
    if max_degree is None:
        bounds = [counting_bound(members, n, w.dim) for w in ws] or [counting_bound(members, n)]
        max_degree = FALLBACK_MAX_DEGREE if any(b is None for b in bounds) else max(bounds)
    for D in range(max_degree + 1):
        N = monomial_count(n, D)
        a = Matrix.from_rows(F, _rows(members, D), N)
        red, piv = rref_rows(F, a.entries, N)
        kernel = kernel_from_rref(F, red, piv, N)
        if not kernel:
            continue
        cons = [Matrix.from_rows(F, flat_vanishing_rows(w, D), N) for w in ws]
        if any(solve_rank_compare(a, c) for c in cons):
            continue
        witness = next((v for v in kernel if _nonzero_everywhere(cons, v)), None)
        if witness is None:
            witness = next((v for v in _combos(F, kernel) if _nonzero_everywhere(cons, v)), None)
        if witness is not None:
            return RelativeDegreeResult(D, MultiPoly.from_vector(F, n, D, witness), ws, len(kernel))
    raise NoSeparationError(
        f"no polynomial of degree <= {max_degree} vanishes on X without vanishing on an avoided flat")
