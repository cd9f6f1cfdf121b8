"""Exact linear algebra over Q and prime fields.

Vectors inside the hot paths are sparse dicts ``{index: value}`` with zero
entries removed; the public matrix functions take dense row-major lists of
lists and convert.  Rationals are ``gmpy2.mpq``; prime-field scalars are
plain ints in ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpq


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class Field:
    """The ground field: rationals (``p == 0``) or F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def kind(self) -> str:
        return "Fp" if self.p else "Q"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self):
        return 0 if self.p else mpq(0)

    @property
    def one(self):
        return 1 if self.p else mpq(1)

    def __call__(self, value):
        """Coerce an int, string, Fraction or mpq into the field."""
        if isinstance(value, str):
            value = value.strip()
            if self.p:
                if "/" in value:
                    num, den = value.split("/")
                    return self.div(int(num) % self.p, int(den) % self.p)
                return int(value) % self.p
            return mpq(value)
        if self.p:
            if isinstance(value, Fraction):
                return self.div(value.numerator % self.p, value.denominator % self.p)
            if isinstance(value, type(mpq(0))):
                return self.div(int(value.numerator) % self.p, int(value.denominator) % self.p)
            return int(value) % self.p
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(int(a), self.p - 2, self.p)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        return str(a)


QQ = Field(0)


# --- sparse vectors -------------------------------------------------------

def axpy(v: dict, c, w: dict, p: int) -> None:
    """In place ``v -= c * w``."""
    if p:
        for k, x in w.items():
            y = (v.get(k, 0) - c * x) % p
            if y:
                v[k] = y
            else:
                v.pop(k, None)
    else:
        for k, x in w.items():
            y = v.get(k, 0) - c * x
            if y:
                v[k] = y
            else:
                v.pop(k, None)


def sparse_add(a: dict, b: dict, p: int, scale=1) -> dict:
    out = dict(a)
    axpy(out, -scale if not p else (-scale) % p, b, p)
    return out


def sparse_scale(a: dict, c, p: int) -> dict:
    if not c:
        return {}
    if p:
        return {k: (x * c) % p for k, x in a.items() if (x * c) % p}
    return {k: x * c for k, x in a.items()}


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each pivot row has its pivot at its smallest index with value 1.  When
    ``track`` is set, every row remembers its expression as a combination of
    the inserted vectors, which yields kernels and solutions for free.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.p = field.p
        self.track = track
        self.rows: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}
        self.count = 0
        self.pivot_sources: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict, combo: dict | None = None):
        """Reduce ``v`` against the basis; returns the residual (and combo)."""
        v = dict(v)
        rows, p = self.rows, self.p
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                break
            k = min(hits)
            c = v[k]
            axpy(v, c, rows[k], p)
            if combo is not None:
                axpy(combo, c, self.combos[k], p)
        return v, combo

    def add(self, v: dict):
        """Insert ``v``; returns None if it was new, else the dependency.

        The dependency is a dict over insertion indices that sums to zero.
        """
        idx = self.count
        self.count += 1
        combo = {idx: self.field.one} if self.track else None
        r, combo = self.reduce(v, combo)
        if not r:
            return combo if self.track else {}
        k = min(r)
        inv = self.field.inv(r[k])
        self.rows[k] = sparse_scale(r, inv, self.p)
        if self.track:
            self.combos[k] = sparse_scale(combo, inv, self.p)
        self.pivot_sources.append(idx)
        return None

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def express(self, v: dict):
        """Coefficients over inserted vectors summing to ``v``, or None."""
        r, combo = self.reduce(v, {})
        if r:
            return None
        return sparse_scale(combo, self.field.neg(self.field.one), self.p)


# --- dense API ------------------------------------------------------------

def _cols_sparse(m: list[list], ncols: int) -> list[dict]:
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if x:
                cols[j][i] = x
    return cols


def _rows_sparse(m: list[list]) -> list[dict]:
    return [{j: x for j, x in enumerate(row) if x} for row in m]


def shape(m: list[list], cols: int | None = None) -> tuple[int, int]:
    if cols is not None:
        return len(m), cols
    return len(m), (len(m[0]) if m else 0)


def zeros(rows: int, cols: int, field: Field = QQ) -> list[list]:
    return [[field.zero] * cols for _ in range(rows)]


def identity(n: int, field: Field = QQ) -> list[list]:
    m = zeros(n, n, field)
    for i in range(n):
        m[i][i] = field.one
    return m


def transpose(m: list[list], cols: int | None = None) -> list[list]:
    r, c = shape(m, cols)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def matmul(a: list[list], b: list[list], field: Field = QQ, inner: int | None = None) -> list[list]:
    r = len(a)
    n = len(b) if inner is None else inner
    c = len(b[0]) if b else 0
    out = zeros(r, c, field)
    p = field.p
    for i in range(r):
        ai = a[i]
        oi = out[i]
        for k in range(n):
            x = ai[k]
            if not x:
                continue
            bk = b[k]
            for j in range(c):
                y = bk[j]
                if y:
                    oi[j] += x * y
        if p:
            out[i] = [v % p for v in oi]
    return out


def rank(m: list[list], field: Field = QQ) -> int:
    """Exact rank."""
    ech = Echelon(field)
    for row in _rows_sparse(m):
        ech.add(row)
    return ech.rank


def rank_sparse(vectors, field: Field = QQ) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


def kernel_basis(m: list[list], field: Field = QQ, cols: int | None = None) -> list[list]:
    """Basis of ``{x : m x = 0}`` as dense vectors, one per non-pivot column."""
    _, c = shape(m, cols)
    return [_dense(v, c, field) for v in kernel_sparse(_cols_sparse(m, c), field)]


def kernel_sparse(columns: list[dict], field: Field = QQ) -> list[dict]:
    """Null space of the matrix whose columns are the given sparse vectors."""
    ech = Echelon(field, track=True)
    out = []
    for col in columns:
        dep = ech.add(col)
        if dep is not None:
            out.append(dep)
    return out


def _dense(v: dict, n: int, field: Field) -> list:
    out = [field.zero] * n
    for k, x in v.items():
        out[k] = x
    return out


def solve(a: list[list], b: list[list], field: Field = QQ, cols: int | None = None):
    """Some ``x`` with ``a x = b``, or None when no solution exists.

    Deterministic: columns of ``a`` enter the echelon in order and pivots sit
    at the first nonzero entry.
    """
    ra, ca = shape(a, cols)
    if ra != len(b):
        raise ValueError(f"dimension mismatch: a has {ra} rows, b has {len(b)}")
    nb = len(b[0]) if b else 0
    ech = Echelon(field, track=True)
    for col in _cols_sparse(a, ca):
        ech.add(col)
    x = zeros(ca, nb, field)
    for j, bcol in enumerate(_cols_sparse(b, nb)):
        coeffs = ech.express(bcol)
        if coeffs is None:
            return None
        for i, val in coeffs.items():
            x[i][j] = val
    return x


def quotient_dims(sub: list[list], ambient_dim: int, field: Field = QQ) -> int:
    """``ambient_dim - rank(span(sub))``."""
    for v in sub:
        if len(v) != ambient_dim:
            raise ValueError("vector length differs from ambient dimension")
    return ambient_dim - rank(sub, field)


def det(m: list[list], field: Field = QQ):
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    a = [list(row) for row in m]
    p = field.p
    d = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = field.neg(d)
        d = field.mul(d, a[c][c])
        inv = field.inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = field.mul(a[r][c], inv)
                a[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[r], a[c])]
    return d


def inverse(m: list[list], field: Field = QQ):
    n = len(m)
    x = solve(m, identity(n, field), field, cols=n)
    if x is None:
        raise ZeroDivisionError("matrix is singular")
    return x


def independent_rows(m: list[list], field: Field = QQ) -> list[int]:
    """Indices of the first maximal set of linearly independent rows."""
    ech = Echelon(field)
    out = []
    for i, row in enumerate(_rows_sparse(m)):
        if ech.add(row) is None:
            out.append(i)
    return out


def independent_vectors(vectors: list[dict], field: Field = QQ) -> list[int]:
    ech = Echelon(field)
    return [i for i, v in enumerate(vectors) if ech.add(v) is None]


def extend_basis(sub: list[dict], candidates: list[dict], field: Field = QQ) -> list[int]:
    """Indices of candidates that extend a basis of span(sub) greedily."""
    ech = Echelon(field)
    for v in sub:
        ech.add(v)
    return [i for i, v in enumerate(candidates) if ech.add(v) is None]


class Coordinates:
    """Coordinates with respect to a linearly independent family of vectors.

    ``coords(v)`` returns the coefficient dict for ``v`` in the span, or
    raises if ``v`` is outside it.
    """

    def __init__(self, vectors: list[dict], field: Field = QQ):
        self.field = field
        self.ech = Echelon(field, track=True)
        for v in vectors:
            if self.ech.add(v) is not None:
                raise ValueError("family is not linearly independent")
        self.size = len(vectors)

    def coords(self, v: dict) -> dict:
        out = self.ech.express(v)
        if out is None:
            raise ValueError("vector outside span")
        return out

    def try_coords(self, v: dict):
        return self.ech.express(v)
