"""Exact arithmetic over F_p and Q, and the dense linear algebra built on it.

Field elements are handled in two forms.  Hot loops work on *raw* values
(an ``int`` in ``[0, p)`` for a prime field, a ``Fraction`` for Q) and a
:class:`FieldSpec` knows how to combine them.  :class:`Scalar` wraps a raw
value together with its field for code that wants operator syntax.

Elimination has three routes:

* a plain Gauss-Jordan pass over raw values, used for small matrices;
* a vectorised modular pass on ``int64`` arrays for prime fields
  (``p < 2**31`` keeps every product below ``2**62``);
* fraction-free (Bareiss) forward elimination over integers followed by
  exact back-substitution, for larger rational systems.

All three produce the same (unique) reduced row-echelon form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InputError

PRIME_LIMIT = 2**31
# below this many entries the pure-Python pass beats numpy's per-call overhead
_SMALL = 96


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if not isinstance(self.p, int) or not (2 <= self.p < PRIME_LIMIT) or not is_prime(self.p):
                raise InputError(f"modulus must be a prime below 2^31, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise InputError("rational field takes no modulus")
        else:
            raise InputError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def size(self) -> int | None:
        """Number of elements, or None for Q."""
        return self.p

    def __str__(self):
        return f"F_{self.p}" if self.is_prime else "Q"

    # raw-value arithmetic -------------------------------------------------

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def __call__(self, x):
        """Canonical raw value of an int, Fraction or Scalar."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise InputError(f"scalar over {x.field} used in {self}")
            return x.value
        if self.is_prime:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime else a - b

    def neg(self, a):
        return -a % self.p if self.is_prime else -a

    def mul(self, a, b):
        return a * b % self.p if self.is_prime else a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_prime else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        return pow(a, e, self.p) if self.is_prime else a**e

    def elements(self):
        """Iterate over F_p in increasing order."""
        if not self.is_prime:
            raise InputError("Q is not enumerable")
        return range(self.p)

    # serialization --------------------------------------------------------

    def format(self, a) -> str:
        if self.is_prime:
            return str(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def parse(self, text) -> int | Fraction:
        if isinstance(text, int):
            return self(text)
        s = str(text).strip().replace("‑", "-").replace("−", "-")
        try:
            return self(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad scalar {text!r} for {self}") from exc

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.is_prime else {"kind": "rational"}

    @classmethod
    def from_json(cls, data) -> "FieldSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise InputError(f"bad field spec {data!r}")
        if data["kind"] == "prime":
            return cls.prime(data.get("p"))
        return cls(data["kind"], data.get("p"))

    @classmethod
    def parse_cli(cls, text: str) -> "FieldSpec":
        """``"7"`` -> F_7; ``"Q"``/``"rational"`` -> Q."""
        if str(text).lower() in ("q", "rational", "qq"):
            return cls.rational()
        try:
            return cls.prime(int(text))
        except ValueError as exc:
            raise InputError(f"bad field {text!r}") from exc


@dataclass(frozen=True)
class Scalar:
    field: FieldSpec
    value: int | Fraction

    @classmethod
    def of(cls, field: FieldSpec, x) -> "Scalar":
        return cls(field, field(x))

    def _other(self, o):
        if isinstance(o, Scalar):
            if o.field != self.field:
                raise InputError(f"mixed fields {self.field} and {o.field}")
            return o.value
        return self.field(o)

    def __add__(self, o):
        return Scalar(self.field, self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Scalar(self.field, self.field.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return Scalar(self.field, self.field.sub(self._other(o), self.value))

    def __mul__(self, o):
        return Scalar(self.field, self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Scalar(self.field, self.field.div(self.value, self._other(o)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.format(self.value)


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of raw values

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = []
        for r in rows:
            row = []
            for x in r:
                if isinstance(x, Scalar) and x.field != field:
                    raise InputError(f"mixed fields {x.field} and {field}")
                row.append(field(x))
            data.append(tuple(row))
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise InputError("ragged matrix")
        return cls(field, len(data), cols, tuple(data))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, n, n, tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)))

    def row(self, i):
        return self.entries[i]

    def apply(self, v: Sequence) -> tuple:
        """M @ v."""
        F = self.field
        out = []
        for r in self.entries:
            acc = F.zero
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            out.append(F(acc))
        return tuple(out)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.field != self.field:
            raise InputError(f"mixed fields {self.field} and {other.field}")
        if other.cols != self.cols:
            raise InputError(f"column mismatch {self.cols} vs {other.cols}")
        return Matrix(self.field, self.rows + other.rows, self.cols, self.entries + other.entries)

    def __str__(self):
        return "\n".join("[" + ", ".join(self.field.format(x) for x in r) + "]" for r in self.entries)


class RrefResult(NamedTuple):
    matrix: Matrix
    rank: int
    pivot_cols: tuple


# elimination kernels on raw row lists ----------------------------------------


def _rref_generic(F: FieldSpec, rows: list, ncols: int):
    rows = [list(r) for r in rows]
    m = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        prow = [F.mul(x, inv) for x in rows[r]]
        rows[r] = prow
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rows[i] = [F.sub(a, F.mul(f, b)) if b else a for a, b in zip(ri, prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref_prime_np(p: int, rows: list, ncols: int):
    A = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    m = A.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r]) % p) % p
        pivots.append(c)
        r += 1
    return [[int(x) for x in row] for row in A.tolist()], pivots


def _bareiss_echelon(rows: list, ncols: int):
    """Fraction-free forward elimination on integer rows; returns echelon rows and pivots."""
    rows = [list(r) for r in rows]
    m = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        a = pr[c]
        for i in range(r + 1, m):
            ri = rows[i]
            b = ri[c]
            # exact division by the previous pivot (Sylvester's identity)
            rows[i] = [0] * c + [(a * ri[j] - b * pr[j]) // prev for j in range(c, ncols)]
        prev = a
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _rref_rational_bareiss(rows: list, ncols: int):
    int_rows = []
    for row in rows:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        int_rows.append([int(Fraction(x) * den) for x in row])
    ech, pivots = _bareiss_echelon(int_rows, ncols)
    out = [[Fraction(x, r[pc]) for x in r] for r, pc in zip(ech, pivots)]
    for k in range(len(out) - 1, -1, -1):
        pc = pivots[k]
        pk = out[k]
        for i in range(k):
            f = out[i][pc]
            if f:
                out[i] = [a - f * b if b else a for a, b in zip(out[i], pk)]
    zero = [Fraction(0)] * ncols
    out.extend(list(zero) for _ in range(len(rows) - len(out)))
    return out, pivots


def rref_rows(F: FieldSpec, rows: Sequence[Sequence], ncols: int):
    """RREF of raw rows; returns (rows as lists, pivot column list)."""
    rows = list(rows)
    if not rows or ncols == 0:
        return [list(r) for r in rows], []
    if len(rows) * ncols <= _SMALL:
        return _rref_generic(F, rows, ncols)
    if F.is_prime:
        return _rref_prime_np(F.p, rows, ncols)
    return _rref_rational_bareiss(rows, ncols)


def rank_rows(F: FieldSpec, rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref_rows(F, rows, ncols)[1])


def kernel_from_rref(F: FieldSpec, rows: list, pivots: Sequence[int], ncols: int) -> list:
    """Right null space basis, one vector per free column (in column order)."""
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for r, pc in enumerate(pivots):
            if rows[r][f]:
                v[pc] = F.neg(rows[r][f])
        basis.append(tuple(v))
    return basis


def kernel_rows(F: FieldSpec, rows: Sequence[Sequence], ncols: int) -> list:
    red, piv = rref_rows(F, rows, ncols)
    return kernel_from_rref(F, red, piv, ncols)


# public operations ------------------------------------------------------------


def rref(m: Matrix) -> RrefResult:
    red, piv = rref_rows(m.field, m.entries, m.cols)
    mat = Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in red))
    return RrefResult(mat, len(piv), tuple(piv))


def rank(m: Matrix) -> int:
    return rank_rows(m.field, m.entries, m.cols)


def kernel_basis(m: Matrix) -> list:
    """Basis of {v : M v = 0}; exactly ``cols - rank`` vectors."""
    return kernel_rows(m.field, m.entries, m.cols)


def solve_rank_compare(a: Matrix, b: Matrix) -> bool:
    """True iff ker(a) is contained in ker(b), i.e. rank(a) == rank([a; b])."""
    if a.field != b.field:
        raise InputError(f"mixed fields {a.field} and {b.field}")
    if a.cols != b.cols:
        raise InputError(f"column mismatch {a.cols} vs {b.cols}")
    return rank(a) == rank(a.stack(b))
