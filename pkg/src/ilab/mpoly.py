"""Sparse multivariate polynomials with exact coefficients.

Terms are a dict ``exponent tuple -> nonzero raw coefficient``.  Restriction
to a line or flat substitutes the affine parametrisation symbolically, so
"f vanishes on l" is decided without sampling points and independently of
the field size.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .errors import InputError
from .exactfield import FieldSpec, Matrix
from .geom import AffineObject


@lru_cache(maxsize=None)
def monomial_basis(n: int, D: int) -> tuple:
    """All exponent vectors of total degree <= D: by degree, then lex-descending."""
    out = []
    for d in range(D + 1):
        out.extend(_exps_of_degree(n, d))
    return tuple(out)


def _exps_of_degree(n, d):
    if n == 1:
        return [(d,)]
    res = []
    for first in range(d, -1, -1):
        for rest in _exps_of_degree(n - 1, d - first):
            res.append((first,) + rest)
    return res


def monomial_count(n: int, D: int) -> int:
    return comb(D + n, n)


def _grlex_key(e):
    return (sum(e), e)


@dataclass(frozen=True, eq=False)
class MultiPoly:
    field: FieldSpec
    nvars: int
    terms: dict

    @classmethod
    def from_terms(cls, F: FieldSpec, nvars: int, terms) -> "MultiPoly":
        out = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise InputError(f"bad exponent {e} for {nvars} variables")
            c = F.add(out.get(e, F.zero), F(c))
            if c:
                out[e] = c
            else:
                out.pop(e, None)
        return cls(F, nvars, out)

    @classmethod
    def zero(cls, F: FieldSpec, nvars: int) -> "MultiPoly":
        return cls(F, nvars, {})

    @classmethod
    def constant(cls, F: FieldSpec, nvars: int, c) -> "MultiPoly":
        return cls.from_terms(F, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, F: FieldSpec, nvars: int, i: int) -> "MultiPoly":
        return cls(F, nvars, {tuple(1 if j == i else 0 for j in range(nvars)): F.one})

    @classmethod
    def linear(cls, F: FieldSpec, coeffs: Sequence, const=0) -> "MultiPoly":
        """sum coeffs[i] x_i + const."""
        n = len(coeffs)
        terms = {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs)}
        terms[(0,) * n] = const
        return cls.from_terms(F, n, terms)

    @classmethod
    def from_vector(cls, F: FieldSpec, nvars: int, D: int, vec: Sequence) -> "MultiPoly":
        """Polynomial with coefficient vector ``vec`` over ``monomial_basis(nvars, D)``."""
        basis = monomial_basis(nvars, D)
        if len(vec) != len(basis):
            raise InputError("coefficient vector does not match the monomial basis")
        return cls(F, nvars, {e: c for e, c in zip(basis, vec) if c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        """Max exponent sum; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, e) -> object:
        return self.terms.get(tuple(e), self.field.zero)

    def to_vector(self, D: int) -> tuple:
        if self.total_degree > D:
            raise InputError(f"degree {self.total_degree} exceeds {D}")
        return tuple(self.terms.get(e, self.field.zero) for e in monomial_basis(self.nvars, D))

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def _check(self, other: "MultiPoly"):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.field, self.nvars, other)
        if other.field != self.field or other.nvars != self.nvars:
            raise InputError("polynomials over different rings")
        return other

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(F, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, F.zero), F.mul(c1, c2))
        return MultiPoly(F, self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.field, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "MultiPoly":
        F = self.field
        c = F(c)
        return MultiPoly(F, self.nvars, {e: F.mul(v, c) for e, v in self.terms.items() if F.mul(v, c)})

    def monic(self) -> "MultiPoly":
        """Scaled so the leading (grlex) coefficient is 1."""
        if self.is_zero:
            return self
        return self.scale(self.field.inv(self.sorted_terms()[0][1]))

    def univariate_coeffs(self) -> list:
        """Coefficient list [c_0, c_1, ...] of a one-variable polynomial."""
        if self.nvars != 1:
            raise InputError("not univariate")
        F = self.field
        out = [F.zero] * (self.total_degree + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def __str__(self):
        if self.is_zero:
            return "0"
        F = self.field
        names = "xyzw" if self.nvars <= 4 else None
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for i, k in enumerate(e):
                if k:
                    v = names[i] if names else f"x{i + 1}"
                    mono.append(v if k == 1 else f"{v}^{k}")
            cs = F.format(c)
            if mono:
                parts.append("*".join(mono) if cs == "1" else f"{cs}*" + "*".join(mono))
            else:
                parts.append(cs)
        return " + ".join(parts)


def evaluate(f: MultiPoly, x) -> object:
    """Exact value of f at a point (coordinate sequence or point object)."""
    if isinstance(x, AffineObject):
        if x.dim != 0:
            raise InputError("evaluate expects a point")
        x = x.base
    if len(x) != f.nvars:
        raise InputError(f"point has {len(x)} coordinates, polynomial {f.nvars} variables")
    F = f.field
    x = [F(v) for v in x]
    acc = F.zero
    for e, c in f.terms.items():
        t = c
        for xi, k in zip(x, e):
            if k:
                t = F.mul(t, F.power(xi, k))
        acc = F.add(acc, t)
    return acc


# restriction -----------------------------------------------------------------


def _line_monomial_table(F: FieldSpec, base, direction, exps):
    """Coefficient lists (in t) of every monomial in ``exps`` along base + t*dir."""
    n = len(base)
    lin = [(base[i], direction[i]) for i in range(n)]
    table = {(0,) * n: [F.one]}

    def get(e):
        got = table.get(e)
        if got is not None:
            return got
        i = next(j for j, k in enumerate(e) if k)
        prev = get(e[:i] + (e[i] - 1,) + e[i + 1:])
        b, d = lin[i]
        out = [F.zero] * (len(prev) + 1)
        for k, c in enumerate(prev):
            if c:
                if b:
                    out[k] = F.add(out[k], F.mul(c, b))
                if d:
                    out[k + 1] = F.add(out[k + 1], F.mul(c, d))
        table[e] = out
        return out

    return {e: get(e) for e in exps}


def restrict_to_line(f: MultiPoly, l: AffineObject) -> MultiPoly:
    """f(base + t*dir) as a polynomial in t; zero iff l lies in Z(f)."""
    if l.dim != 1:
        raise InputError("restrict_to_line expects a line")
    if l.ambient_dim != f.nvars or l.field != f.field:
        raise InputError("line and polynomial live in different spaces")
    F = f.field
    table = _line_monomial_table(F, l.base, l.basis[0], f.terms.keys())
    acc = [F.zero] * (max(f.total_degree, 0) + 1)
    for e, c in f.terms.items():
        for k, v in enumerate(table[e]):
            if v:
                acc[k] = F.add(acc[k], F.mul(c, v))
    return MultiPoly(F, 1, {(k,): c for k, c in enumerate(acc) if c})


def _flat_monomial_table(F: FieldSpec, w: AffineObject, exps):
    """Each monomial of ``exps`` restricted to w, as a sparse dict in dim(w) params."""
    n, m = w.ambient_dim, w.dim
    lin = []
    for i in range(n):
        form = {}
        if w.base[i]:
            form[(0,) * m] = w.base[i]
        for j, v in enumerate(w.basis):
            if v[i]:
                form[tuple(1 if q == j else 0 for q in range(m))] = v[i]
        lin.append(form)
    table = {(0,) * n: {(0,) * m: F.one}}

    def get(e):
        got = table.get(e)
        if got is not None:
            return got
        i = next(j for j, k in enumerate(e) if k)
        prev = get(e[:i] + (e[i] - 1,) + e[i + 1:])
        out = {}
        for e1, c1 in prev.items():
            for e2, c2 in lin[i].items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = F.add(out.get(key, F.zero), F.mul(c1, c2))
        out = {k: v for k, v in out.items() if v}
        table[e] = out
        return out

    return {e: get(e) for e in exps}


def restrict_to_flat(f: MultiPoly, w: AffineObject) -> MultiPoly:
    """f(base + sum u_j v_j) in dim(w) variables; zero iff f vanishes on w."""
    if w.ambient_dim != f.nvars or w.field != f.field:
        raise InputError("flat and polynomial live in different spaces")
    F = f.field
    m = w.dim
    if m == 0:
        return MultiPoly.constant(F, 1, evaluate(f, w.base))
    table = _flat_monomial_table(F, w, f.terms.keys())
    acc = {}
    for e, c in f.terms.items():
        for k, v in table[e].items():
            acc[k] = F.add(acc.get(k, F.zero), F.mul(c, v))
    return MultiPoly(F, m, {k: v for k, v in acc.items() if v})


def vanishes_on(f: MultiPoly, o: AffineObject) -> bool:
    """Does o lie in Z(f)?  Decided symbolically."""
    if o.dim == 0:
        return not evaluate(f, o.base)
    if o.dim == 1:
        return restrict_to_line(f, o).is_zero
    return restrict_to_flat(f, o).is_zero


# constraint rows ---------------------------------------------------------------


def point_vanishing_row(F: FieldSpec, x, D: int) -> list:
    """Row whose dot product with a coefficient vector is f(x)."""
    x = [F(v) for v in x]
    n = len(x)
    pw = [[F.power(xi, k) for k in range(D + 1)] for xi in x]
    row = []
    for e in monomial_basis(n, D):
        v = F.one
        for i, k in enumerate(e):
            if k:
                v = F.mul(v, pw[i][k])
        row.append(v)
    return row


def line_vanishing_rows(l: AffineObject, D: int) -> list:
    """D+1 rows: coefficient of t^k in the restriction of each basis monomial."""
    if D < 0:
        raise InputError("degree must be nonnegative")
    F = l.field
    basis = monomial_basis(l.ambient_dim, D)
    table = _line_monomial_table(F, l.base, l.basis[0], basis)
    rows = [[F.zero] * len(basis) for _ in range(D + 1)]
    for col, e in enumerate(basis):
        for k, v in enumerate(table[e]):
            if v:
                rows[k][col] = v
    return rows


def flat_vanishing_rows(w: AffineObject, D: int) -> list:
    """C(D+m, m) rows: coefficient of each parameter monomial in the restriction."""
    F = w.field
    if w.dim == 0:
        return [point_vanishing_row(F, w.base, D)]
    if w.dim == 1:
        return line_vanishing_rows(w, D)
    basis = monomial_basis(w.ambient_dim, D)
    table = _flat_monomial_table(F, w, basis)
    params = monomial_basis(w.dim, D)
    index = {e: i for i, e in enumerate(params)}
    rows = [[F.zero] * len(basis) for _ in params]
    for col, e in enumerate(basis):
        for k, v in table[e].items():
            rows[index[k]][col] = v
    return rows


def vanishing_rows(o: AffineObject, D: int) -> list:
    if o.dim == 0:
        return [point_vanishing_row(o.field, o.base, D)]
    return flat_vanishing_rows(o, D)


def line_vanishing_constraints(l: AffineObject, D: int) -> Matrix:
    """Matrix over ``monomial_basis(n, D)`` whose kernel is {f : l in Z(f)}."""
    if l.dim != 1:
        raise InputError("expected a line")
    return Matrix.from_rows(l.field, line_vanishing_rows(l, D), monomial_count(l.ambient_dim, D))


def point_vanishing_constraints(x: AffineObject, D: int) -> Matrix:
    return Matrix.from_rows(x.field, [point_vanishing_row(x.field, x.base, D)], monomial_count(x.ambient_dim, D))


# JSON ------------------------------------------------------------------------


def poly_to_json(f: MultiPoly) -> dict:
    F = f.field
    return {"nvars": f.nvars, "terms": [{"exp": list(e), "coef": F.format(c)} for e, c in f.sorted_terms()]}


def poly_from_json(F: FieldSpec, data: dict) -> MultiPoly:
    try:
        n = int(data["nvars"])
        terms = [(t["exp"], F.parse(t["coef"])) for t in data["terms"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed polynomial {data!r}") from exc
    acc = MultiPoly.zero(F, n)
    for e, c in terms:
        acc = acc + MultiPoly.from_terms(F, n, {tuple(e): c})
    return acc
