"""Finite-dimensional modules over a truncated quotient algebra, and King
stability checked by exhaustive submodule enumeration.

Matrix convention: the matrix of an arrow ``a: i -> j`` has shape
``d_j x d_i`` and acts on column vectors from the left, so the path
``("a", "b")`` (follow a, then b) evaluates to ``M_b @ M_a``.

Stability runs on two exact regimes and nothing in between.  A *thin*
module (every ``d_i <= 1``) has its submodules classified by vertex subsets
closed under the arrows that act by a nonzero scalar -- valid over any
field.  Otherwise submodules are enumerated as tuples of subspaces over a
prime field, with a small total-dimension cap; asking for that over the
rationals is refused rather than approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import BadInput, CapExceeded
from .jacobian import TruncatedAlgebra, jacobian_ideal_generators
from .linalg import (
    in_row_space,
    mat_mul,
    nullspace,
    rref,
    zeros,
)
from .quiver import Quiver

__all__ = [
    "Representation",
    "SUBMODULE_TOTAL_CAP",
    "check_module",
    "pairing",
    "hom_space",
    "end_dim",
    "is_brick",
    "submodule_dim_vectors",
    "subrepresentations",
    "is_semistable",
    "is_stable",
    "is_simple_in_W_theta",
]

SUBMODULE_TOTAL_CAP = 6


@dataclass(frozen=True)
class Representation:
    """A module given by one matrix per arrow over an exact field."""

    quiver: Quiver
    field: object
    dims: tuple[int, ...]
    mats: dict[str, list[list[object]]] = dc_field(default_factory=dict)

    def __post_init__(self):
        q = self.quiver
        if len(self.dims) != q.n:
            raise BadInput(f"expected {q.n} dimensions, got {len(self.dims)}")
        if any(not isinstance(d, int) or d < 0 for d in self.dims):
            raise BadInput("dimensions must be non-negative integers")
        object.__setattr__(self, "dims", tuple(self.dims))
        want = {a.id for a in q.arrows}
        got = set(self.mats)
        if want != got:
            raise BadInput(
                f"matrices must cover the arrows exactly; missing {sorted(want - got)}, "
                f"unexpected {sorted(got - want)}"
            )
        f = self.field
        fixed: dict[str, list[list[object]]] = {}
        for a in q.arrows:
            m = self.mats[a.id]
            rows, cols = self.dims[a.tgt], self.dims[a.src]
            if len(m) != rows or any(len(r) != cols for r in m):
                raise BadInput(
                    f"matrix for {a.id!r} must be {rows}x{cols} (target x source)"
                )
            fixed[a.id] = [[f.coerce(x) for x in r] for r in m]
        object.__setattr__(self, "mats", fixed)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def is_thin(self) -> bool:
        return all(d <= 1 for d in self.dims)

    def evaluate_path(self, ids) -> list[list[object]]:
        """Product of the arrow matrices along a composable path."""
        ids = tuple(ids)
        if not ids:
            raise BadInput("a path needs at least one arrow here")
        q = self.quiver
        cur = self.mats[ids[0]]
        tail = q.arrow(ids[0]).tgt
        for x in ids[1:]:
            a = q.arrow(x)
            if a.src != tail:
                raise BadInput(f"path {ids!r} breaks at {x!r}")
            cur = mat_mul(self.mats[x], cur, self.field)
            tail = a.tgt
        return cur


def check_module(algebra: TruncatedAlgebra, M: Representation) -> bool:
    """True iff M is really a module for the truncated quotient.

    Two conditions: every cyclic-derivative generator evaluates to zero, and
    the action is nilpotent within the truncation order -- the span of
    images of all length-``t`` products must die by ``t = N``, which is
    checked on a shrinking chain of subspaces rather than path by path.
    """
    q = algebra.qp.quiver
    if M.quiver.n != q.n or {a.id: (a.src, a.tgt) for a in M.quiver.arrows} != {
        a.id: (a.src, a.tgt) for a in q.arrows
    }:
        raise BadInput("representation and algebra live on different quivers")
    f = M.field
    zero = f.zero()
    for g in jacobian_ideal_generators(algebra.qp):
        if g.is_zero():
            continue
        rows, cols = M.dims[g.tgt], M.dims[g.src]
        acc = zeros(rows, cols, f)
        for ids, c in g.items():
            term = M.evaluate_path(ids)
            cf = f.coerce(c)
            acc = [
                [f.add(x, f.mul(cf, y)) for x, y in zip(ar, tr)]
                for ar, tr in zip(acc, term)
            ]
        if any(x != zero for row in acc for x in row):
            return False
    # nilpotency: W_{t+1}[j] = span of M_a W_t[i] over arrows a: i -> j
    spans: list[list[list[object]]] = []
    for v in range(q.n):
        eye = [[f.one() if i == j else zero for j in range(M.dims[v])] for i in range(M.dims[v])]
        spans.append(eye)
    for _t in range(algebra.truncation):
        total = sum(len(s) for s in spans)
        if total == 0:
            return True
        nxt: list[list[list[object]]] = [[] for _ in range(q.n)]
        for a in q.arrows:
            for vec in spans[a.src]:
                img = mat_mul(M.mats[a.id], [[x] for x in vec], f)
                nxt[a.tgt].append([r[0] for r in img])
        spans = [rref(rows, f)[0] if rows else [] for rows in nxt]
        if sum(len(s) for s in spans) >= total:
            return False  # stuck at a nonzero fixed chain: not nilpotent
    return sum(len(s) for s in spans) == 0


def pairing(theta, d) -> int:
    """The integer pairing Σ θ_i d_i."""
    if len(theta) != len(d):
        raise BadInput(f"length mismatch: {len(theta)} weights vs {len(d)} dimensions")
    return sum(t * x for t, x in zip(theta, d))


def hom_space(M: Representation, N: Representation):
    """Module maps M -> N: all (f_i) with f_j M_a = N_a f_i per arrow a: i->j.

    Returns ``(dimension, basis)``, each basis element a per-vertex list of
    matrices of shape ``N.dims[i] x M.dims[i]``.
    """
    if M.field is not N.field:
        raise BadInput("representations over different fields")
    q = M.quiver
    if N.quiver.n != q.n or {a.id: (a.src, a.tgt) for a in N.quiver.arrows} != {
        a.id: (a.src, a.tgt) for a in q.arrows
    }:
        raise BadInput("representations of different quivers")
    f = M.field
    offsets = []
    total = 0
    for v in range(q.n):
        offsets.append(total)
        total += N.dims[v] * M.dims[v]

    def var(v: int, r: int, c: int) -> int:
        # f_v[r][c], row-major
        return offsets[v] + r * M.dims[v] + c

    rows: list[list[object]] = []
    zero = f.zero()
    for a in q.arrows:
        i, j = a.src, a.tgt
        Ma, Na = M.mats[a.id], N.mats[a.id]
        for r in range(N.dims[j]):
            for c in range(M.dims[i]):
                row = [zero] * total
                for t in range(M.dims[j]):
                    row[var(j, r, t)] = f.add(row[var(j, r, t)], Ma[t][c])
                for s in range(N.dims[i]):
                    row[var(i, s, c)] = f.sub(row[var(i, s, c)], Na[r][s])
                if any(x != zero for x in row):
                    rows.append(row)
    if total == 0:
        return 0, []
    if not rows:
        rows = [[zero] * total]
    basis_vecs = nullspace(rows, f)
    basis = []
    for vec in basis_vecs:
        per_vertex = []
        for v in range(q.n):
            mat = [
                [vec[var(v, r, c)] for c in range(M.dims[v])] for r in range(N.dims[v])
            ]
            per_vertex.append(mat)
        basis.append(per_vertex)
    return len(basis_vecs), basis


def end_dim(M: Representation) -> int:
    return hom_space(M, M)[0]


BRICK_ENUM_CAP = 100_000


def _blocks_invertible(per_vertex, dims, f) -> bool:
    for mat, d in zip(per_vertex, dims):
        if d and len(rref(mat, f)[0]) != d:
            return False
    return True


def is_brick(M: Representation) -> bool:
    """End(M) is a division algebra.

    Over an algebraically closed field that pins End down to the scalars,
    but here the base fields are exact surrogates, and a stable module can
    perfectly well have End a bigger field (already F_9 for a 4-dimensional
    module over F_3) -- it is still a brick.  So: scalar End is always a
    brick; otherwise a basis element with a singular vertex block is a
    witness against division; otherwise, over a finite field, every nonzero
    element of End is enumerated and tested for invertibility.  A non-scalar
    End over the rationals with no such witness is refused rather than
    guessed (deciding division there is a number-theoretic problem).
    """
    dim, basis = hom_space(M, M)
    if dim == 0:
        return False  # the zero module
    if dim == 1:
        return True
    f = M.field
    for elem in basis:
        if not _blocks_invertible(elem, M.dims, f):
            return False
    if not f.finite:
        raise CapExceeded(
            "cannot certify a non-scalar endomorphism ring over the rationals "
            "as a division algebra"
        )
    if f.char**dim - 1 > BRICK_ENUM_CAP:
        raise CapExceeded(
            f"endomorphism ring has {f.char}^{dim} elements; over the enumeration cap"
        )
    elems = f.elements()
    zero = f.zero()
    for coeffs in itertools.product(elems, repeat=dim):
        if all(c == zero for c in coeffs):
            continue
        combo = []
        for v in range(len(M.dims)):
            mat = zeros(M.dims[v], M.dims[v], f)
            for c, elem in zip(coeffs, basis):
                if c == zero:
                    continue
                block = elem[v]
                for r in range(M.dims[v]):
                    for s in range(M.dims[v]):
                        mat[r][s] = f.add(mat[r][s], f.mul(c, block[r][s]))
            combo.append(mat)
        if not _blocks_invertible(combo, M.dims, f):
            return False
    return True


# ---------------------------------------------------------------------------
# submodules


def _all_subspaces(d: int, f) -> list[tuple[list[list[object]], list[int]]]:
    """Every subspace of F^d as (RREF rows, pivot columns), 0 and full included."""
    if not f.finite:
        raise CapExceeded("cannot enumerate subspaces over an infinite field")
    elems = f.elements()
    out: list[tuple[list[list[object]], list[int]]] = [([], [])]
    for k in range(1, d + 1):
        for pivots in itertools.combinations(range(d), k):
            free_pos = [
                (r, c)
                for r in range(k)
                for c in range(d)
                if c > pivots[r] and c not in pivots
            ]
            for values in itertools.product(elems, repeat=len(free_pos)):
                rows = [[f.zero()] * d for _ in range(k)]
                for r, p in enumerate(pivots):
                    rows[r][p] = f.one()
                for (r, c), val in zip(free_pos, values):
                    rows[r][c] = val
                out.append((rows, list(pivots)))
    return out


def _closed_tuples(M: Representation):
    """Yield (dim_vector, per-vertex RREF bases) for every submodule.

    Thin modules reduce to closed vertex subsets and work over any field;
    anything else is an exhaustive prime-field enumeration under the cap.
    """
    q = M.quiver
    f = M.field
    zero = f.zero()
    if M.is_thin():
        support = [v for v in range(q.n) if M.dims[v] == 1]
        forcing = [
            (a.src, a.tgt)
            for a in q.arrows
            if M.dims[a.src] == 1 and M.dims[a.tgt] == 1 and M.mats[a.id][0][0] != zero
        ]
        for bits in itertools.product((0, 1), repeat=len(support)):
            S = {v for v, b in zip(support, bits) if b}
            if any(i in S and j not in S for i, j in forcing):
                continue
            dims = tuple(1 if v in S else 0 for v in range(q.n))
            bases = [([[f.one()]], [0]) if v in S else ([], []) for v in range(q.n)]
            yield dims, bases
        return
    if M.total_dim > SUBMODULE_TOTAL_CAP:
        raise CapExceeded(
            f"total dimension {M.total_dim} exceeds the submodule cap {SUBMODULE_TOTAL_CAP}"
        )
    if not f.finite:
        raise CapExceeded(
            "submodule enumeration for non-thin modules needs a prime field"
        )
    per_vertex = [_all_subspaces(M.dims[v], f) for v in range(q.n)]
    for combo in itertools.product(*per_vertex):
        ok = True
        for a in M.quiver.arrows:
            rows_i = combo[a.src][0]
            rows_j, piv_j = combo[a.tgt]
            for u in rows_i:
                img = mat_mul(M.mats[a.id], [[x] for x in u], f)
                vec = [r[0] for r in img]
                if not in_row_space(vec, rows_j, piv_j, f):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield tuple(len(c[0]) for c in combo), list(combo)


def submodule_dim_vectors(M: Representation) -> set[tuple[int, ...]]:
    """Dimension vectors of all submodules (0 and [M] always included)."""
    return {dims for dims, _bases in _closed_tuples(M)}


def _restrict_to(M: Representation, bases) -> Representation:
    """The submodule spanned by per-vertex RREF bases, as a representation.

    Coordinates of an image in an RREF basis are read off the pivot columns.
    """
    f = M.field
    dims = tuple(len(rows) for rows, _p in bases)
    mats = {}
    for a in M.quiver.arrows:
        rows_i, _ = bases[a.src]
        _, piv_j = bases[a.tgt]
        cols = []
        for u in rows_i:
            img = mat_mul(M.mats[a.id], [[x] for x in u], f)
            vec = [r[0] for r in img]
            cols.append([vec[p] for p in piv_j])
        mats[a.id] = [[cols[c][r] for c in range(dims[a.src])] for r in range(dims[a.tgt])]
    return Representation(quiver=M.quiver, field=f, dims=dims, mats=mats)


def subrepresentations(M: Representation):
    """Yield (dim_vector, submodule-as-representation) over all submodules."""
    for dims, bases in _closed_tuples(M):
        yield dims, _restrict_to(M, bases)


# ---------------------------------------------------------------------------
# stability


def is_semistable(M: Representation, theta) -> bool:
    """King semistability: M sits on the wall and no submodule crosses it."""
    if pairing(theta, M.dims) != 0:
        return False
    return all(pairing(theta, e) <= 0 for e in submodule_dim_vectors(M))


def is_stable(M: Representation, theta) -> bool:
    """King stability: nonzero, on the wall, every proper submodule strictly below."""
    if M.is_zero() or pairing(theta, M.dims) != 0:
        return False
    zero_vec = (0,) * len(M.dims)
    for e in submodule_dim_vectors(M):
        if e == zero_vec or e == M.dims:
            continue
        if pairing(theta, e) >= 0:
            return False
    return True


def is_simple_in_W_theta(M: Representation, theta) -> bool:
    """No proper nonzero submodule is itself a wall object.

    Decided from scratch: M must be a nonzero semistable module with pairing
    zero, and every proper nonzero submodule is extracted as an actual
    representation and tested for semistability at pairing zero.
    """
    if M.is_zero() or not is_semistable(M, theta):
        return False
    zero_vec = (0,) * len(M.dims)
    for dims, sub in subrepresentations(M):
        if dims == zero_vec or dims == M.dims:
            continue
        if pairing(theta, dims) == 0 and is_semistable(sub, theta):
            return False
    return True
