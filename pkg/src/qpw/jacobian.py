"""Truncated quotient of a path algebra by the cyclic-derivative ideal.

Everything happens inside the span of paths of length at most ``N``.  The
relation space is generated by ``u . g . v`` for every cyclic derivative
``g`` of the potential and all path pairs ``(u, v)`` that keep the length
within ``N`` (longer pieces of a product are simply dropped: they are zero
in the truncation).  Modulo that span, the path classes of length ``>= d``
filter the algebra by powers of the arrow ideal, and the layer dimensions
are read off a sparse row echelon whose columns are ordered shortest-first:
each echelon row then sits inside the span of paths no shorter than its
lead, so a pivot on a length-``d`` column eats exactly one dimension of
layer ``d``.  (Relations can mix degrees -- a short path congruent to
longer ones -- and the short component is the one that leaves its layer.)

The layers are exact for the complete (power-series) quotient: only
finitely many products contribute below any fixed length, so truncating the
relation set loses nothing under ``N``.  A zero layer propagates upward
(degree one generates), which gives the finiteness certificate: once some
layer under ``N`` dies, the total dimension is the sum of the layers before
it.  If the first zero sits exactly at the truncation edge -- or never
shows -- the verdict is left open rather than guessed.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInput, QPWError, SizeGuardExceeded
from .qp import QP, PathCombination, cyclic_derivative

__all__ = [
    "FinDimCert",
    "TruncatedAlgebra",
    "truncated_quotient",
    "jacobian_ideal_generators",
    "ProductResult",
    "multiply",
    "MAX_PATHS",
]

MAX_PATHS = 200_000

# an element is a rational combination of canonical basis paths,
# keyed by (source vertex, arrow-id tuple); () is the lazy path at a vertex
Element = dict[tuple[int, tuple[str, ...]], Fraction]


@dataclass(frozen=True)
class FinDimCert:
    """Finiteness verdict for the truncated quotient."""

    status: str  # "FiniteDim" or "UndeterminedAtTruncation"
    truncation: int
    graded_dims: tuple[int, ...]
    first_zero: int | None
    total_dim: int | None


class TruncatedAlgebra:
    """The quotient algebra, with a canonical-form calculator on top.

    ``graded_dims[d]`` is the dimension of the length-``d`` layer for
    ``0 <= d <= N``.  Elements are kept in canonical form: supported on
    non-pivot ("standard") paths only.
    """

    def __init__(self, qp: QP, truncation: int):
        if not isinstance(truncation, int) or truncation < 2:
            raise BadInput(f"truncation order must be an integer >= 2, got {truncation!r}")
        self.qp = qp
        self.truncation = truncation
        q = qp.quiver
        N = truncation

        by_deg: list[list[tuple[int, tuple[str, ...], int]]] = [
            [(i, (), i) for i in range(q.n)]
        ]
        total = q.n
        out_arrows = [q.arrows_from(v) for v in range(q.n)]
        for _d in range(1, N + 1):
            layer = []
            for src, ids, tgt in by_deg[-1]:
                for a in out_arrows[tgt]:
                    layer.append((src, ids + (a.id,), a.tgt))
                    total += 1
                    if total > MAX_PATHS:
                        raise SizeGuardExceeded(
                            f"more than {MAX_PATHS} paths below length {N}; "
                            "lower the truncation or shrink the quiver"
                        )
            by_deg.append(layer)
        self._by_deg = by_deg

        # columns: shortest paths first, lexicographic inside a layer.  With
        # leads on the shortest component every echelon row lies inside
        # span(paths of length >= its lead), which is what makes per-degree
        # pivot counting compute the filtration layers even for relations
        # that mix degrees (a short path congruent to longer ones must spend
        # its pivot on the SHORT side).
        cols: list[tuple[int, tuple[str, ...], int]] = []
        for d in range(N + 1):
            cols.extend(sorted(by_deg[d]))
        self._cols = cols
        self._col_of = {(src, ids): i for i, (src, ids, _tgt) in enumerate(cols)}
        self._tgt_of = {(src, ids): tgt for (src, ids, tgt) in cols}

        self._pivots: dict[int, dict[int, Fraction]] = {}
        self._build_relations()

        pivot_lengths = [len(self._cols[c][1]) for c in self._pivots]
        counts = [0] * (N + 1)
        for length in pivot_lengths:
            counts[length] += 1
        dims = [len(by_deg[d]) - counts[d] for d in range(N + 1)]
        if any(x < 0 for x in dims):
            raise QPWError("internal: negative layer dimension")
        first_zero = next((d for d in range(N + 1) if dims[d] == 0), None)
        if first_zero is not None and any(dims[d] != 0 for d in range(first_zero, N + 1)):
            raise QPWError("internal: a zero layer failed to propagate upward")
        self.graded_dims: tuple[int, ...] = tuple(dims)
        if first_zero is not None and first_zero < N:
            cert = FinDimCert(
                status="FiniteDim",
                truncation=N,
                graded_dims=self.graded_dims,
                first_zero=first_zero,
                total_dim=sum(dims[:first_zero]),
            )
        else:
            cert = FinDimCert(
                status="UndeterminedAtTruncation",
                truncation=N,
                graded_dims=self.graded_dims,
                first_zero=first_zero,
                total_dim=None,
            )
        self.certificate = cert

    # -- construction ------------------------------------------------------

    def _insert(self, vec: dict[int, Fraction]) -> None:
        pivots = self._pivots
        while vec:
            lead = min(vec)
            row = pivots.get(lead)
            if row is None:
                inv = Fraction(1) / vec[lead]
                pivots[lead] = {c: v * inv for c, v in vec.items()}
                return
            factor = vec[lead]
            for c, v in row.items():
                nv = vec.get(c, Fraction(0)) - factor * v
                if nv == 0:
                    vec.pop(c, None)
                else:
                    vec[c] = nv
        return

    def _build_relations(self) -> None:
        q = self.qp.quiver
        N = self.truncation
        by_deg = self._by_deg
        for arrow in q.arrows:
            g = cyclic_derivative(self.qp, arrow.id)
            if g.is_zero():
                continue
            gmin = min(len(p) for p in g.terms)
            budget = N - gmin
            for du in range(0, budget + 1):
                for usrc, uids, utgt in by_deg[du]:
                    if utgt != g.src:
                        continue
                    for dv in range(0, budget - du + 1):
                        for vsrc, vids, vtgt in by_deg[dv]:
                            if vsrc != g.tgt:
                                continue
                            vec: dict[int, Fraction] = {}
                            for p, c in g.terms.items():
                                if du + len(p) + dv > N:
                                    continue
                                col = self._col_of[(usrc, uids + p + vids)]
                                nc = vec.get(col, Fraction(0)) + c
                                if nc == 0:
                                    vec.pop(col, None)
                                else:
                                    vec[col] = nc
                            if vec:
                                self._insert(vec)

    # -- canonical forms and products --------------------------------------

    def _reduce_cols(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        pivots = self._pivots
        out = dict(vec)
        # subtracting a pivot row only touches columns right of its lead,
        # so one left-to-right sweep is enough
        agenda = sorted(out)
        i = 0
        while i < len(agenda):
            col = agenda[i]
            val = out.get(col)
            if val:
                row = pivots.get(col)
                if row is not None:
                    for c, v in row.items():
                        nv = out.get(c, Fraction(0)) - val * v
                        if nv == 0:
                            out.pop(c, None)
                        else:
                            if c not in out and c > col:
                                bisect.insort(agenda, c, lo=i + 1)  # keep the sweep ordered
                            out[c] = nv
                    out.pop(col, None)
            i += 1
        return {c: v for c, v in out.items() if v != 0}

    def reduce_element(self, elem: Element) -> Element:
        """Canonical form: rewrite onto non-pivot paths (and drop overlong ones)."""
        vec: dict[int, Fraction] = {}
        for (src, ids), c in elem.items():
            if c == 0:
                continue
            if len(ids) > self.truncation:
                continue
            col = self._col_of.get((src, ids))
            if col is None:
                raise BadInput(f"no path {ids!r} out of vertex {src}")
            vec[col] = vec.get(col, Fraction(0)) + c
        red = self._reduce_cols(vec)
        return {
            (self._cols[c][0], self._cols[c][1]): v for c, v in red.items()
        }

    def idempotent(self, v: int) -> Element:
        return self.reduce_element({(v, ()): Fraction(1)})

    def path_class(self, ids, coeff=1) -> Element:
        """Class of one path, given by its arrow ids."""
        ids = tuple(ids)
        src = self.qp.quiver.arrow(ids[0]).src if ids else None
        if src is None:
            raise BadInput("a path needs at least one arrow; use idempotent() for lazy paths")
        # validate composability via endpoints
        cur = src
        for x in ids:
            a = self.qp.quiver.arrow(x)
            if a.src != cur:
                raise BadInput(f"path {ids!r} breaks at {x!r}")
            cur = a.tgt
        if len(ids) > self.truncation:
            return {}
        return self.reduce_element({(src, ids): Fraction(coeff)})

    def product(self, x: Element, y: Element) -> Element:
        """Concatenate, truncate, reduce."""
        acc: Element = {}
        for (sx, px), cx in x.items():
            tx = self._tgt_of[(sx, px)]
            for (sy, py), cy in y.items():
                if tx != sy:
                    continue
                if len(px) + len(py) > self.truncation:
                    continue
                key = (sx, px + py)
                acc[key] = acc.get(key, Fraction(0)) + cx * cy
        return self.reduce_element(acc)

    def add(self, x: Element, y: Element) -> Element:
        acc = dict(x)
        for k, v in y.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return {k: v for k, v in acc.items() if v != 0}

    def scale(self, x: Element, c) -> Element:
        c = Fraction(c)
        return {k: v * c for k, v in x.items() if v * c != 0}

    def is_zero(self, x: Element) -> bool:
        return not self.reduce_element(x)

    def basis_paths(self, src: int | None = None, tgt: int | None = None) -> list[tuple[int, tuple[str, ...]]]:
        """Standard (non-pivot) paths, optionally filtered by endpoints."""
        out = []
        for i, (s, ids, t) in enumerate(self._cols):
            if i in self._pivots:
                continue
            if src is not None and s != src:
                continue
            if tgt is not None and t != tgt:
                continue
            out.append((s, ids))
        out.sort(key=lambda k: (len(k[1]), k[1], k[0]))
        return out

    def hom_dim(self, i: int, j: int) -> int:
        """dim of maps between the projectives at i and j: paths from j to i."""
        return len(self.basis_paths(src=j, tgt=i))


def truncated_quotient(qp: QP, truncation: int) -> TruncatedAlgebra:
    """Build the truncated quotient; see the class for the contract."""
    return TruncatedAlgebra(qp, truncation)


def jacobian_ideal_generators(qp: QP) -> list[PathCombination]:
    """One generator per arrow: the potential's cyclic derivative along it.

    Ordered by arrow id for determinism.  Generators inherit the potential's
    truncation: a term of length d contributes derivative pieces of length
    d - 1, so nothing here ever exceeds it.
    """
    return [cyclic_derivative(qp, a.id) for a in sorted(qp.quiver.arrows, key=lambda a: a.id)]


@dataclass(frozen=True)
class ProductResult:
    """A product in the quotient, with bookkeeping the element alone can't carry.

    ``dropped`` -- some concatenation exceeded the truncation order and was
    discarded; ``mismatch`` -- some pair of factor paths had non-matching
    endpoints and contributed zero.  Neither is an error.
    """

    element: Element
    dropped: bool
    mismatch: bool


def multiply(algebra: TruncatedAlgebra, x: Element, y: Element) -> ProductResult:
    """Product of two elements, flagging truncation drops and endpoint mismatches."""
    acc: Element = {}
    dropped = False
    mismatch = False
    for (sx, px), cx in algebra.reduce_element(x).items():
        tx = algebra._tgt_of[(sx, px)]
        for (sy, py), cy in algebra.reduce_element(y).items():
            if tx != sy:
                mismatch = True
                continue
            if len(px) + len(py) > algebra.truncation:
                dropped = True
                continue
            key = (sx, px + py)
            acc[key] = acc.get(key, Fraction(0)) + cx * cy
    return ProductResult(
        element=algebra.reduce_element(acc), dropped=dropped, mismatch=mismatch
    )
