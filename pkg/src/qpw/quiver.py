"""Finite quivers and Fomin-Zelevinsky mutation.

A quiver is held two ways at once: a skew-symmetric exchange matrix ``b``
(``b[i][j] > 0`` means ``b[i][j]`` arrows from i to j) and an explicit arrow
list with stable string ids.  The matrix is the source of truth for mutation
and classification; the arrow list carries identity for potentials.  Vertices
are 0-based everywhere inside the package; the JSON layer shifts to 1-based.

Arrow lists are allowed to contain 2-cycles (they appear mid-computation in
potential premutation); the ``two_cycle_free`` flag tells the two regimes
apart.  Loops are never allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapExceeded, InvalidQuiver, TwoCycleObstruction, VertexOutOfRange

__all__ = [
    "Arrow",
    "Quiver",
    "build_quiver",
    "mutate",
    "full_subquiver",
    "relabel",
    "is_connected",
    "is_acyclic",
    "canonical_form",
    "two_cycle_pairs",
]

CANONICAL_MAX_VERTICES = 9


@dataclass(frozen=True)
class Arrow:
    """A single arrow ``src -> tgt`` with a stable string id."""

    id: str
    src: int
    tgt: int


@dataclass(frozen=True)
class Quiver:
    n: int
    b: tuple[tuple[int, ...], ...]
    arrows: tuple[Arrow, ...]
    labels: tuple[str, ...] | None = None
    _by_id: dict[str, Arrow] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {a.id: a for a in self.arrows})

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise InvalidQuiver(f"unknown arrow id {arrow_id!r}") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._by_id

    def arrows_from(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def arrows_into(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tgt == v]

    def arrows_at(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if v in (a.src, a.tgt)]

    @property
    def two_cycle_free(self) -> bool:
        heads = {(a.src, a.tgt) for a in self.arrows}
        return not any((t, s) in heads for (s, t) in heads)

    def vertex_label(self, v: int) -> str:
        if self.labels is not None:
            return self.labels[v]
        return str(v + 1)


def _check_matrix(b: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    n = len(b)
    for row in b:
        if len(row) != n:
            raise InvalidQuiver("exchange matrix must be square")
    for i in range(n):
        if b[i][i] != 0:
            raise InvalidQuiver(f"nonzero diagonal entry at vertex {i}: loops are not allowed")
        for j in range(n):
            if not isinstance(b[i][j], int):
                raise InvalidQuiver("exchange matrix entries must be integers")
            if b[i][j] != -b[j][i]:
                raise InvalidQuiver(f"matrix is not skew-symmetric at ({i},{j})")
    return tuple(tuple(row) for row in b)


def _arrows_from_matrix(b) -> list[Arrow]:
    arrows: list[Arrow] = []
    k = 1
    n = len(b)
    for i in range(n):
        for j in range(n):
            for _ in range(max(b[i][j], 0)):
                arrows.append(Arrow(f"a{k}", i, j))
                k += 1
    return arrows


def _matrix_from_arrows(n: int, arrows: list[Arrow]) -> tuple[tuple[int, ...], ...]:
    b = [[0] * n for _ in range(n)]
    for a in arrows:
        b[a.src][a.tgt] += 1
        b[a.tgt][a.src] -= 1
    return tuple(tuple(row) for row in b)


def build_quiver(
    matrix: list[list[int]] | None = None,
    arrows: list[tuple[str, int, int]] | list[Arrow] | None = None,
    n: int | None = None,
    labels: list[str] | None = None,
) -> Quiver:
    """Build a quiver from an exchange matrix, an arrow list, or both.

    With only ``matrix``, arrows are generated from the positive entries and
    given fresh ids ``a1, a2, ...``.  With only ``arrows`` (plus ``n``), the
    matrix is the signed count of arrows; 2-cycles are then representable.
    With both, consistency is enforced.
    """
    if matrix is None and arrows is None:
        raise InvalidQuiver("need a matrix or an arrow list")
    arrow_objs: list[Arrow] | None = None
    if arrows is not None:
        arrow_objs = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
        seen: set[str] = set()
        for a in arrow_objs:
            if a.id in seen:
                raise InvalidQuiver(f"duplicate arrow id {a.id!r}")
            seen.add(a.id)
    if matrix is not None:
        b = _check_matrix(matrix)
        nn = len(matrix)
    else:
        if n is None:
            raise InvalidQuiver("an arrow-only quiver needs an explicit vertex count")
        nn = n
        b = None  # computed below
    if arrow_objs is not None:
        for a in arrow_objs:
            if not (0 <= a.src < nn and 0 <= a.tgt < nn):
                raise InvalidQuiver(f"arrow {a.id!r} endpoints out of range")
            if a.src == a.tgt:
                raise InvalidQuiver(f"arrow {a.id!r} is a loop")
        if b is None:
            b = _matrix_from_arrows(nn, arrow_objs)
        elif b != _matrix_from_arrows(nn, arrow_objs):
            raise InvalidQuiver("arrow list does not match the exchange matrix")
    else:
        arrow_objs = _arrows_from_matrix(b)
    if labels is not None and len(labels) != nn:
        raise InvalidQuiver("label count must equal the vertex count")
    return Quiver(nn, b, tuple(arrow_objs), tuple(labels) if labels is not None else None)


def mutate(q: Quiver, k: int) -> Quiver:
    """Mutate the quiver at vertex ``k`` (0-based).

    Matrix-level rule: entries in row/column ``k`` flip sign, and
    ``b[i][j]`` picks up ``sgn(b[i][k]) * b[i][k] * b[k][j]`` whenever
    ``b[i][k] * b[k][j] > 0``.  Arrows are regenerated with fresh ids, so
    arrow identity does not survive quiver-level mutation (the potential
    layer has its own mutation that tracks arrows).

    Raises
    ------
    VertexOutOfRange
        if ``k`` is not a vertex.
    TwoCycleObstruction
        if the quiver contains a 2-cycle (mutation is undefined there).
    """
    if not (0 <= k < q.n):
        raise VertexOutOfRange(f"vertex {k} out of range for a quiver on {q.n} vertices")
    if not q.two_cycle_free:
        raise TwoCycleObstruction("mutation is undefined on a quiver with 2-cycles")
    n, b = q.n, q.b
    nb = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                nb[i][j] = -b[i][j]
            else:
                prod = b[i][k] * b[k][j]
                if prod > 0:
                    sign = 1 if b[i][k] > 0 else -1
                    nb[i][j] = b[i][j] + sign * prod
                else:
                    nb[i][j] = b[i][j]
    return build_quiver(matrix=nb, labels=list(q.labels) if q.labels else None)


def full_subquiver(q: Quiver, vertices: list[int]) -> Quiver:
    """Restrict to ``vertices`` (kept in sorted order), keeping arrow ids."""
    vs = sorted(set(vertices))
    for v in vs:
        if not (0 <= v < q.n):
            raise VertexOutOfRange(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(vs)}
    arrows = [Arrow(a.id, index[a.src], index[a.tgt]) for a in q.arrows if a.src in index and a.tgt in index]
    labels = [q.labels[v] for v in vs] if q.labels is not None else None
    return build_quiver(arrows=arrows, n=len(vs), labels=labels)


def relabel(q: Quiver, sigma: list[int]) -> Quiver:
    """Apply the vertex bijection ``old -> sigma[old]``, keeping arrow ids."""
    if sorted(sigma) != list(range(q.n)):
        raise InvalidQuiver("relabeling must be a permutation of the vertices")
    arrows = [Arrow(a.id, sigma[a.src], sigma[a.tgt]) for a in q.arrows]
    labels = None
    if q.labels is not None:
        labels = [""] * q.n
        for old, new in enumerate(sigma):
            labels[new] = q.labels[old]
    return build_quiver(arrows=arrows, n=q.n, labels=labels)


def two_cycle_pairs(q: Quiver) -> list[tuple[int, int]]:
    """Vertex pairs (i < j) joined by arrows in both directions."""
    heads = {(a.src, a.tgt) for a in q.arrows}
    return sorted({(min(s, t), max(s, t)) for (s, t) in heads if (t, s) in heads})


def _undirected_adjacency(q: Quiver) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(q.n)]
    for a in q.arrows:
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    for i in range(q.n):
        for j in range(q.n):
            if q.b[i][j] != 0:
                adj[i].add(j)
                adj[j].add(i)
    return adj

def is_connected(q: Quiver) -> bool:
    if q.n == 0:
        return True
    adj = _undirected_adjacency(q)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == q.n


def is_acyclic(q: Quiver) -> bool:
    """True when the quiver has no directed cycle (2-cycles included)."""
    out: list[set[int]] = [set() for _ in range(q.n)]
    for a in q.arrows:
        out[a.src].add(a.tgt)
    for i in range(q.n):
        for j in range(q.n):
            if q.b[i][j] > 0:
                out[i].add(j)
    state = [0] * q.n  # 0 new, 1 on stack, 2 done
    def visit(v: int) -> bool:
        state[v] = 1
        for w in out[v]:
            if state[w] == 1:
                return False
            if state[w] == 0 and not visit(w):
                return False
        state[v] = 2
        return True
    return all(state[v] == 2 or visit(v) for v in range(q.n))


def canonical_form(q: Quiver) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Canonical representative of the quiver under vertex relabeling.

    Returns ``(sigma, B)`` where ``sigma[pos]`` is the original vertex placed
    at position ``pos`` and ``B[i][j] = b[sigma[i]][sigma[j]]`` is the
    minimum over all vertex orders of the "staircase" flattening (each new
    position contributes its row segment then its column segment).  The
    minimization is exhaustive over permutations, with branch-and-bound
    pruning, and refuses quivers with more than 9 vertices.

    Two quivers are related by a relabeling iff their canonical matrices are
    equal.
    """
    n, b = q.n, q.b
    if n > CANONICAL_MAX_VERTICES:
        raise CapExceeded(
            f"canonical form is exhaustive and limited to {CANONICAL_MAX_VERTICES} vertices (got {n})"
        )
    if n == 0:
        return (), ()
    best_key: list[int] | None = None
    best_perm: list[int] | None = None

    def extend(perm: list[int], key: list[int], used: int) -> None:
        nonlocal best_key, best_perm
        r = len(perm)
        if r == n:
            if best_key is None or key < best_key:
                best_key = list(key)
                best_perm = list(perm)
            return
        cands = []
        for v in range(n):
            if used & (1 << v):
                continue
            seg = [b[v][w] for w in perm] + [b[w][v] for w in perm]
            cands.append((seg, v))
        cands.sort()
        for seg, v in cands:
            newkey = key + seg
            if best_key is not None and newkey > best_key[: len(newkey)]:
                break  # candidates are sorted: everything after is worse too
            extend(perm + [v], newkey, used | (1 << v))

    extend([], [], 0)
    assert best_perm is not None
    mat = tuple(tuple(b[best_perm[i]][best_perm[j]] for j in range(n)) for i in range(n))
    return tuple(best_perm), mat
