"""Mutation-class exploration and finite/affine type recognition.

The classifier walks the mutation class breadth-first, deduplicating by
canonical form, and watches for three kinds of evidence:

* an entry of absolute value >= 3 anywhere in the class (on >= 3 vertices
  this certifies an infinite mutation class),
* an entry of absolute value 2 (rules out finite "Dynkin" type, whose whole
  class stays within {0, +-1}),
* an acyclic member whose underlying diagram matches the simply-laced
  Dynkin or extended (affine) catalog -- that settles the type immediately.

Rank 2 never needs a walk: a double arrow is the affine Kronecker quiver and
anything heavier is mutation-infinite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BudgetExceeded, InvalidQuiver, QPWError
from .quiver import Quiver, build_quiver, canonical_form, full_subquiver, is_acyclic, is_connected, mutate

__all__ = [
    "DiagramMatch",
    "MutationType",
    "ClassReport",
    "DEFAULT_BFS_BUDGET",
    "dynkin_graph",
    "affine_graph",
    "match_catalog_shape",
    "mutation_class_bfs",
    "classify",
    "find_non_dynkin_core",
]

DEFAULT_BFS_BUDGET = 200_000
_REPRESENTATIVE_CAP = 8


@dataclass(frozen=True)
class DiagramMatch:
    """A hit in the diagram catalog: ``series`` A/D/E, affine or not."""

    series: str
    rank: int
    affine: bool

    def display(self) -> str:
        return f"{self.series}_{self.rank}" + ("^(1)" if self.affine else "")


@dataclass(frozen=True)
class MutationType:
    """Outcome of classification.

    ``kind`` is one of ``dynkin``, ``affine``, ``finite_other``,
    ``infinite``.  For the first two, ``witness_sequence`` applied to the
    input yields ``witness_quiver``, an acyclic quiver whose underlying
    diagram is the catalog entry ``(series, rank)``.
    """

    kind: str
    series: str | None = None
    rank: int | None = None
    witness_sequence: tuple[int, ...] | None = None
    witness_quiver: Quiver | None = None
    visited: int = 0

    def display(self) -> str:
        if self.kind == "dynkin":
            return f"Dynkin {self.series}_{self.rank}"
        if self.kind == "affine":
            return f"Affine {self.series}_{self.rank}^(1)"
        if self.kind == "finite_other":
            return "MutationFiniteOther"
        return "MutationInfinite"


@dataclass
class ClassReport:
    """Result of a mutation-class walk: size, sample, and why it stopped."""

    visited: int
    abort_reason: str | None
    representatives: list[Quiver] = field(default_factory=list)
    max_abs_entry: int = 0


# ---------------------------------------------------------------------------
# diagram catalog


def dynkin_graph(series: str, rank: int) -> list[tuple[int, int]]:
    """Edge list of the simply-laced Dynkin diagram ``series``_``rank``."""
    if series == "A" and rank >= 1:
        return [(i, i + 1) for i in range(rank - 1)]
    if series == "D" and rank >= 4:
        return [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, rank - 1)]
    if series == "E" and rank in (6, 7, 8):
        path = [(i, i + 1) for i in range(rank - 2)]
        return path + [(2, rank - 1)]
    raise InvalidQuiver(f"no Dynkin diagram {series}_{rank}")


def affine_graph(series: str, rank: int) -> list[tuple[int, int]]:
    """Edge list (with multiplicity) of the extended diagram ``series``_``rank``^(1)."""
    if series == "A" and rank == 1:
        return [(0, 1), (0, 1)]
    if series == "A" and rank >= 2:
        return [(i, i + 1) for i in range(rank)] + [(rank, 0)]
    if series == "D" and rank == 4:
        return [(0, 4), (1, 4), (2, 4), (3, 4)]
    if series == "D" and rank >= 5:
        return (
            [(0, 2), (1, 2)]
            + [(i, i + 1) for i in range(2, rank - 2)]
            + [(rank - 2, rank - 1), (rank - 2, rank)]
        )
    if series == "E" and rank == 6:
        return [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]
    if series == "E" and rank == 7:
        return [(i, i + 1) for i in range(6)] + [(3, 7)]
    if series == "E" and rank == 8:
        return [(i, i + 1) for i in range(7)] + [(2, 8)]
    raise InvalidQuiver(f"no extended diagram {series}_{rank}^(1)")


def _leg_lengths(adj: list[set[int]], center: int) -> list[int]:
    legs = []
    for w in adj[center]:
        length = 1
        prev, cur = center, w
        while len(adj[cur]) == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        if len(adj[cur]) > 2:
            return []  # runs into another junction: not a star
        legs.append(length)
    return sorted(legs, reverse=True)


def match_catalog_shape(q: Quiver) -> DiagramMatch | None:
    """Match an acyclic quiver's underlying diagram against the catalog.

    Returns None when the quiver is not acyclic, is disconnected, or its
    diagram is not (extended) simply-laced A/D/E.  The double arrow on two
    vertices counts as the rank-1 affine entry.
    """
    n = q.n
    if n == 0 or not is_connected(q) or not is_acyclic(q):
        return None
    entries = [abs(q.b[i][j]) for i in range(n) for j in range(i + 1, n)]
    if n == 2 and entries[0] == 2:
        return DiagramMatch("A", 1, affine=True)
    if any(e > 1 for e in entries):
        return None
    adj: list[set[int]] = [set() for _ in range(n)]
    nedges = 0
    for i in range(n):
        for j in range(i + 1, n):
            if q.b[i][j] != 0:
                adj[i].add(j)
                adj[j].add(i)
                nedges += 1
    degs = sorted((len(s) for s in adj), reverse=True)
    if nedges == n and all(d == 2 for d in degs) and n >= 3:
        return DiagramMatch("A", n - 1, affine=True)
    if nedges != n - 1:
        return None
    # below: trees
    maxd = degs[0] if degs else 0
    if maxd <= 2:
        return DiagramMatch("A", n, affine=False)
    if maxd == 4:
        if n == 5 and degs == [4, 1, 1, 1, 1]:
            return DiagramMatch("D", 4, affine=True)
        return None
    junctions = [v for v in range(n) if len(adj[v]) == 3]
    if maxd == 3 and len(junctions) == 1:
        legs = _leg_lengths(adj, junctions[0])
        if len(legs) != 3:
            return None
        a, b, c = legs
        if (b, c) == (1, 1):
            return DiagramMatch("D", a + 3, affine=False)
        table = {
            (2, 2, 1): ("E", 6, False),
            (3, 2, 1): ("E", 7, False),
            (4, 2, 1): ("E", 8, False),
            (2, 2, 2): ("E", 6, True),
            (3, 3, 1): ("E", 7, True),
            (5, 2, 1): ("E", 8, True),
        }
        hit = table.get((a, b, c))
        return DiagramMatch(*hit) if hit else None
    if maxd == 3 and len(junctions) == 2:
        if degs.count(1) != 4 or any(d > 3 for d in degs):
            return None
        for v in junctions:
            if sum(1 for w in adj[v] if len(adj[w]) == 1) != 2:
                return None
        return DiagramMatch("D", n - 1, affine=True)
    return None


# ---------------------------------------------------------------------------
# breadth-first walk of the mutation class


def _walk(q0: Quiver, budget: int, stop_entry: int | None):
    """Yield ('node', quiver, seq) events, ending with ('abort', reason) or ('done',)."""
    seen = {canonical_form(q0)[1]}
    queue: deque[tuple[Quiver, tuple[int, ...]]] = deque([(q0, ())])
    while queue:
        q, seq = queue.popleft()
        if stop_entry is not None and q.n >= 2:
            m = max(abs(e) for row in q.b for e in row)
            if m >= stop_entry:
                yield ("abort", f"entryGE{stop_entry}", q, seq)
                return
        yield ("node", q, seq)
        for k in range(q.n):
            nq = mutate(q, k)
            key = canonical_form(nq)[1]
            if key not in seen:
                if len(seen) >= budget:
                    yield ("abort", "budget", nq, seq + (k,))
                    return
                seen.add(key)
                queue.append((nq, seq + (k,)))
    yield ("done", None, None, None)


def mutation_class_bfs(
    q: Quiver, budget: int = DEFAULT_BFS_BUDGET, stop_entry: int | None = 3
) -> ClassReport:
    """Explore the whole mutation class up to relabeling.

    ``visited`` counts canonical forms reached.  The walk aborts early when
    an entry reaches ``stop_entry`` in absolute value (reason ``entryGE2`` /
    ``entryGE3``) or when the class outgrows ``budget`` (reason ``budget``).
    """
    visited = 0
    max_entry = 0
    reps: list[Quiver] = []
    abort = None
    for event in _walk(q, budget, stop_entry):
        tag = event[0]
        if tag == "node":
            quiver = event[1]
            visited += 1
            if quiver.n > 1:
                max_entry = max(max_entry, max(abs(x) for row in quiver.b for x in row))
            if len(reps) < _REPRESENTATIVE_CAP:
                reps.append(quiver)
        elif tag == "abort":
            abort = event[1]
            break
        else:
            break
    return ClassReport(visited=visited, abort_reason=abort, representatives=reps, max_abs_entry=max_entry)


def classify(q: Quiver, budget: int = DEFAULT_BFS_BUDGET) -> MutationType:
    """Determine the mutation type of a connected quiver.

    Returns a Dynkin or Affine tag (witness sequence included) as soon as an
    acyclic class member matches the catalog; returns MutationInfinite when
    an entry reaches 3 on >= 3 vertices; returns MutationFiniteOther when the
    class closes without a catalog hit.  Budget exhaustion raises
    ``BudgetExceeded`` rather than guessing.
    """
    if q.n == 0:
        raise InvalidQuiver("cannot classify the empty quiver")
    if not is_connected(q):
        raise InvalidQuiver("classification requires a connected quiver")
    if q.n == 2:
        m = abs(q.b[0][1])
        if m == 0:
            raise InvalidQuiver("classification requires a connected quiver")
        if m == 1:
            return MutationType("dynkin", "A", 2, (), q, visited=1)
        if m == 2:
            return MutationType("affine", "A", 1, (), q, visited=1)
        return MutationType("infinite", visited=1)
    visited = 0
    for event in _walk(q, budget, stop_entry=3):
        tag = event[0]
        if tag == "node":
            quiver, seq = event[1], event[2]
            visited += 1
            hit = match_catalog_shape(quiver)
            if hit is not None:
                kind = "affine" if hit.affine else "dynkin"
                return MutationType(kind, hit.series, hit.rank, tuple(seq), quiver, visited=visited)
        elif tag == "abort":
            reason = event[1]
            if reason == "budget":
                raise BudgetExceeded(
                    f"mutation class of size > {budget} without a catalog hit; not classified"
                )
            return MutationType("infinite", visited=visited + 1)
        else:
            break
    return MutationType("finite_other", visited=visited)


def find_non_dynkin_core(q: Quiver, budget: int = DEFAULT_BFS_BUDGET) -> list[int] | None:
    """Smallest full subquiver certifying that ``q`` is not of Dynkin type.

    Scans vertex subsets by size then lexicographically; a hit is either a
    vertex pair carrying a multiple arrow (Kronecker core) or a connected
    full subquiver of affine type.  Returns None exactly when ``q`` itself
    is Dynkin.
    """
    if not is_connected(q):
        raise InvalidQuiver("core search requires a connected quiver")
    if classify(q, budget).kind == "dynkin":
        return None
    for size in range(2, q.n + 1):
        for subset in combinations(range(q.n), size):
            sub = full_subquiver(q, list(subset))
            if not is_connected(sub):
                continue
            if size == 2:
                if abs(sub.b[0][1]) >= 2:
                    return list(subset)
                continue
            try:
                t = classify(sub, budget)
            except BudgetExceeded:
                continue
            if t.kind == "affine":
                return list(subset)
    raise QPWError(
        "internal inconsistency: quiver is not Dynkin yet no affine or Kronecker core was found"
    )
