"""Exact linear algebra over the rationals and small prime fields.

Everything here is deliberately dependency-free: matrices are lists of lists
of field elements (``fractions.Fraction`` over Q, plain ints mod p over F_p)
and the algorithms are textbook Gauss elimination -- exactness makes partial
pivoting pointless.  All ranks, kernels and echelon
forms used anywhere in the package go through this module.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CapExceeded

__all__ = [
    "QQ",
    "GF",
    "FIELDS",
    "field_by_name",
    "rref",
    "rank",
    "nullspace",
    "mat_mul",
    "mat_vec",
    "identity",
    "zeros",
    "is_zero_matrix",
    "in_row_space",
]


class RationalField:
    """The field of rationals; elements are ``fractions.Fraction``."""

    name = "Q"
    char = 0
    finite = False

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, k: int):
        return Fraction(k)

    def coerce(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def elements(self):
        raise CapExceeded("cannot enumerate the rationals")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p for a small prime p; elements are ints in ``range(p)``."""

    finite = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, p)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.char = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k: int):
        return k % self.p

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def elements(self):
        return list(range(self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()
_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


FIELDS = {"Q": QQ, "F2": GF(2), "F3": GF(3), "F5": GF(5)}


def field_by_name(name: str):
    try:
        return FIELDS[name]
    except KeyError:
        raise ValueError(f"unsupported field {name!r}; choose from {sorted(FIELDS)}") from None


def zeros(rows: int, cols: int, f):
    z = f.zero()
    return [[z] * cols for _ in range(rows)]


def identity(n: int, f):
    m = zeros(n, n, f)
    one = f.one()
    for i in range(n):
        m[i][i] = one
    return m


def is_zero_matrix(m, f) -> bool:
    z = f.zero()
    return all(x == z for row in m for x in row)


def mat_mul(a, b, f):
    """Matrix product a @ b; shapes (m x k) x (k x n)."""
    if not a or not b:
        rows = len(a)
        cols = len(b[0]) if b else 0
        return zeros(rows, cols, f)
    k = len(b)
    n = len(b[0])
    z = f.zero()
    out = []
    for row in a:
        if len(row) != k:
            raise ValueError("matrix shape mismatch in product")
        new = []
        for j in range(n):
            acc = z
            for t in range(k):
                acc = f.add(acc, f.mul(row[t], b[t][j]))
            new.append(acc)
        out.append(new)
    return out


def mat_vec(a, v, f):
    return [row_i[0] for row_i in mat_mul(a, [[x] for x in v], f)] if a else []


def rref(matrix, f):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero echelon rows
    and ``pivots`` the pivot column of each.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    z = f.zero()
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != z:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != z:
                coef = rows[i][c]
                rows[i] = [f.sub(x, f.mul(coef, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix, f) -> int:
    return len(rref(matrix, f)[0])


def nullspace(matrix, f):
    """Basis of the right kernel {x : matrix @ x = 0} as a list of vectors."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix, f)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    z, one = f.zero(), f.one()
    for fc in free:
        v = [z] * ncols
        v[fc] = one
        for row, pc in zip(rows, pivots):
            v[pc] = f.neg(row[fc])
        basis.append(v)
    return basis


def in_row_space(vector, echelon_rows, pivots, f) -> bool:
    """Membership test against an RREF basis (used for subspace checks)."""
    v = list(vector)
    z = f.zero()
    for row, pc in zip(echelon_rows, pivots):
        if v[pc] != z:
            coef = v[pc]
            v = [f.sub(x, f.mul(coef, y)) for x, y in zip(v, row)]
    return all(x == z for x in v)
