"""Two-term complexes of projectives and the homotopy pairing between them.

A complex here is a single map ``P^{-1} -> P^0`` between direct sums of the
vertex projectives of a truncated quotient algebra.  Maps between projectives
are spanned by paths run backwards (a map ``P_i -> P_j`` is left
multiplication by a combination of paths from ``j`` to ``i``), so the
differential is a block matrix whose ``(row j, col i)`` entry is such a
combination, and composition is literally matrix multiplication over the
algebra.

The pairing ``e_pair(a1, a2)`` counts maps from ``a1`` into the shift of
``a2`` up to homotopy: every map ``P_1^{-1} -> P_2^0`` is a chain map, and it
is null-homotopic exactly when it factors as ``f . a1 + a2 . g``.  So the
value is the dimension of the middle Hom space minus the rank of that
factorization map -- pure exact linear algebra over the rationals, which is
why a finite-dimension certificate on the algebra is demanded up front.

Generic values are sampled: random coefficients on every block entry, the
minimum over a seeded stream, reported together with the witnessing pair.
That is an attained upper bound, not a proof of genericity; the probe wraps
the same sampling into rigidity evidence (diagonal minimum) and tameness
evidence (off-diagonal minimum).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadInput, UndeterminedTruncation
from .jacobian import Element, TruncatedAlgebra
from .linalg import QQ, rank

__all__ = [
    "COEFF_RANGE",
    "TwoTermComplex",
    "hom_projectives",
    "presentation_space",
    "e_pair",
    "random_presentation",
    "e_generic",
    "RigidTameReport",
    "rigid_tame_probe",
]

# random block coefficients are integers drawn from [-COEFF_RANGE, COEFF_RANGE]
COEFF_RANGE = 9999


def hom_projectives(algebra: TruncatedAlgebra, i: int, j: int) -> list[Element]:
    """Basis of the maps from the projective at ``i`` to the one at ``j``.

    Each basis map is left multiplication by one standard path from ``j`` to
    ``i``; composing two of them multiplies the paths in the algebra.
    """
    n = algebra.qp.quiver.n
    for v in (i, j):
        if not 0 <= v < n:
            raise BadInput(f"vertex {v} out of range for {n} vertices")
    return [
        {(src, ids): Fraction(1)} for (src, ids) in algebra.basis_paths(src=j, tgt=i)
    ]


def _summand_vertices(mult: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(v for v, m in enumerate(mult) for _ in range(m))


def _path_target(algebra: TruncatedAlgebra, src: int, ids: tuple[str, ...]) -> int:
    cur = src
    for x in ids:
        cur = algebra.qp.quiver.arrow(x).tgt
    return cur


class TwoTermComplex:
    """A map between direct sums of projectives, in block-matrix form.

    ``p1`` counts the summands in the source (degree -1), ``p0`` those in the
    target (degree 0), both as per-vertex multiplicities.  ``blocks[row][col]``
    is the component from source summand ``col`` into target summand ``row``:
    a combination of paths from the target's vertex to the source's vertex.
    Entries are put into canonical form on construction.
    """

    __slots__ = ("algebra", "p1", "p0", "blocks", "p1_vertices", "p0_vertices")

    def __init__(self, algebra: TruncatedAlgebra, p1, p0, blocks) -> None:
        if algebra.certificate.status != "FiniteDim":
            raise UndeterminedTruncation(
                "the pairing needs finite-dimensional Hom spaces; the algebra's "
                f"certificate says {algebra.certificate.status!r}"
            )
        n = algebra.qp.quiver.n
        p1 = tuple(p1)
        p0 = tuple(p0)
        for name, mult in (("p1", p1), ("p0", p0)):
            if len(mult) != n:
                raise BadInput(f"{name} has {len(mult)} entries for {n} vertices")
            if any(not isinstance(m, int) or m < 0 for m in mult):
                raise BadInput(f"{name} must hold non-negative integers, got {mult}")
        self.algebra = algebra
        self.p1 = p1
        self.p0 = p0
        self.p1_vertices = _summand_vertices(p1)
        self.p0_vertices = _summand_vertices(p0)

        rows = [list(r) for r in blocks]
        if len(rows) != len(self.p0_vertices):
            raise BadInput(
                f"expected {len(self.p0_vertices)} block rows, got {len(rows)}"
            )
        canon = []
        for r, row in enumerate(rows):
            if len(row) != len(self.p1_vertices):
                raise BadInput(
                    f"block row {r} has {len(row)} entries, expected "
                    f"{len(self.p1_vertices)}"
                )
            new_row = []
            for c, entry in enumerate(row):
                elem = algebra.reduce_element(dict(entry))
                for src, ids in elem:
                    if src != self.p0_vertices[r]:
                        raise BadInput(
                            f"block ({r},{c}) holds a path out of vertex {src}; "
                            f"it must start at the target summand's vertex "
                            f"{self.p0_vertices[r]}"
                        )
                    tgt = _path_target(algebra, src, ids)
                    if tgt != self.p1_vertices[c]:
                        raise BadInput(
                            f"block ({r},{c}) holds a path into vertex {tgt}; "
                            f"it must end at the source summand's vertex "
                            f"{self.p1_vertices[c]}"
                        )
                new_row.append(elem)
            canon.append(tuple(new_row))
        self.blocks = tuple(canon)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TwoTermComplex(p1={self.p1}, p0={self.p0})"


def presentation_space(algebra: TruncatedAlgebra, g) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split an integer vector into summand multiplicities ``(p1, p0)``.

    The positive part prescribes the degree-0 summands, the negative part the
    degree -1 summands; the two never share a vertex.
    """
    g = tuple(g)
    n = algebra.qp.quiver.n
    if len(g) != n:
        raise BadInput(f"vector has {len(g)} entries for {n} vertices")
    if any(not isinstance(x, int) for x in g):
        raise BadInput(f"vector must hold integers, got {g}")
    p0 = tuple(max(x, 0) for x in g)
    p1 = tuple(max(-x, 0) for x in g)
    return p1, p0


def e_pair(a1: TwoTermComplex, a2: TwoTermComplex) -> int:
    """Dimension of the maps from ``a1`` to the shift of ``a2``, up to homotopy.

    Concretely: ``dim Hom(P_1^{-1}, P_2^0)`` minus the rank of
    ``(f, g) |-> f . a1 + a2 . g`` where ``f`` runs over maps between the
    degree-0 terms and ``g`` over maps between the degree -1 terms.
    """
    if a1.algebra is not a2.algebra:
        raise BadInput("the two complexes live over different algebras")
    algebra = a1.algebra

    src1 = a1.p1_vertices  # degree -1 summands of the first complex
    tgt1 = a1.p0_vertices
    src2 = a2.p1_vertices
    tgt2 = a2.p0_vertices

    # coordinates on Hom(P_1^{-1}, P_2^0)
    col_of: dict[tuple[int, int, tuple[str, ...]], int] = {}
    for d2, w in enumerate(tgt2):
        for c1, u in enumerate(src1):
            for _src, ids in algebra.basis_paths(src=w, tgt=u):
                col_of[(d2, c1, ids)] = len(col_of)
    if not col_of:
        return 0

    rows: list[list[Fraction]] = []

    def add_row(entries: dict[tuple[int, int, tuple[str, ...]], Fraction]) -> None:
        row = [Fraction(0)] * len(col_of)
        for key, val in entries.items():
            row[col_of[key]] = val
        rows.append(row)

    # f . a1 for elementary f: one path from target summand d2 to target summand d1
    for d2, w in enumerate(tgt2):
        for d1, v in enumerate(tgt1):
            for _src, p in algebra.basis_paths(src=w, tgt=v):
                entries: dict[tuple[int, int, tuple[str, ...]], Fraction] = {}
                left = {(w, p): Fraction(1)}
                for c1 in range(len(src1)):
                    prod = algebra.product(left, a1.blocks[d1][c1])
                    for (_s, ids), coeff in prod.items():
                        key = (d2, c1, ids)
                        entries[key] = entries.get(key, Fraction(0)) + coeff
                add_row({k: v for k, v in entries.items() if v != 0})

    # a2 . g for elementary g: one path from source summand c2 to source summand c1
    for c2, x in enumerate(src2):
        for c1, u in enumerate(src1):
            for _src, q in algebra.basis_paths(src=x, tgt=u):
                entries = {}
                right = {(x, q): Fraction(1)}
                for d2 in range(len(tgt2)):
                    prod = algebra.product(a2.blocks[d2][c2], right)
                    for (_s, ids), coeff in prod.items():
                        key = (d2, c1, ids)
                        entries[key] = entries.get(key, Fraction(0)) + coeff
                add_row({k: v for k, v in entries.items() if v != 0})

    return len(col_of) - rank(rows, QQ)


def random_presentation(
    algebra: TruncatedAlgebra, g, rng: random.Random
) -> TwoTermComplex:
    """A complex with the summands prescribed by ``g`` and random block entries.

    Every block entry gets an independent integer coefficient from
    ``[-COEFF_RANGE, COEFF_RANGE]`` on each standard path, drawn from ``rng``
    in a fixed order, so a shared generator yields a reproducible stream.
    """
    p1, p0 = presentation_space(algebra, g)
    p1v = _summand_vertices(p1)
    p0v = _summand_vertices(p0)
    blocks = []
    for w in p0v:
        row = []
        for u in p1v:
            entry: Element = {}
            for src, ids in algebra.basis_paths(src=w, tgt=u):
                coeff = Fraction(rng.randint(-COEFF_RANGE, COEFF_RANGE))
                if coeff:
                    entry[(src, ids)] = coeff
            row.append(entry)
        blocks.append(row)
    return TwoTermComplex(algebra, p1, p0, blocks)


def e_generic(
    algebra: TruncatedAlgebra, g1, g2, samples: int, seed: int
) -> tuple[int, tuple[TwoTermComplex, TwoTermComplex]]:
    """Minimum pairing over sampled random presentations of ``g1`` and ``g2``.

    An attained upper bound for the generic value: the second component is
    the witnessing pair, so the caller can re-evaluate it.  For a fixed seed
    the sample stream is a prefix of any longer run, which makes the value
    monotone non-increasing in ``samples``.
    """
    if samples < 1:
        raise BadInput(f"need at least one sample, got {samples}")
    rng = random.Random(seed)
    best: tuple[int, tuple[TwoTermComplex, TwoTermComplex]] | None = None
    for _ in range(samples):
        a1 = random_presentation(algebra, g1, rng)
        a2 = random_presentation(algebra, g2, rng)
        value = e_pair(a1, a2)
        if best is None or value < best[0]:
            best = (value, (a1, a2))
    assert best is not None
    return best


@dataclass(frozen=True)
class RigidTameReport:
    """Sampled evidence about one summand prescription.

    ``diagonal_min`` is the least self-pairing over single samples (zero is
    rigidity evidence); ``off_diagonal_min`` the least pairing over sampled
    independent pairs (zero is tameness evidence).  Both are attained upper
    bounds at the recorded sample count and seed.
    """

    diagonal_min: int
    off_diagonal_min: int
    samples: int
    seed: int


def rigid_tame_probe(
    algebra: TruncatedAlgebra, g, samples: int, seed: int
) -> RigidTameReport:
    """Probe the self-pairing of ``g``: diagonal and off-diagonal minima."""
    if samples < 1:
        raise BadInput(f"need at least one sample, got {samples}")
    rng = random.Random(seed)
    diagonal = None
    for _ in range(samples):
        a = random_presentation(algebra, g, rng)
        value = e_pair(a, a)
        diagonal = value if diagonal is None else min(diagonal, value)
    off_diagonal = None
    for _ in range(samples):
        a1 = random_presentation(algebra, g, rng)
        a2 = random_presentation(algebra, g, rng)
        value = e_pair(a1, a2)
        off_diagonal = value if off_diagonal is None else min(off_diagonal, value)
    assert diagonal is not None and off_diagonal is not None
    return RigidTameReport(
        diagonal_min=diagonal,
        off_diagonal_min=off_diagonal,
        samples=samples,
        seed=seed,
    )
