"""Potentials on quivers: cyclic sums of paths, right-equivalence,
premutation, and reduction down to the part with no 2-cycles.

Conventions, fixed once and for all:

* paths compose left to right: the tuple ``("a", "b")`` means "follow a,
  then b" and needs ``tgt(a) == src(b)``;
* a cycle is a path whose last arrow ends where the first one starts; it is
  stored as the lexicographically smallest rotation of its arrow-id tuple;
* coefficients are exact rationals.

Mutation of a quiver with potential happens in two stages.  ``premutate``
performs the local surgery at a vertex (composite arrows, reversed arrows,
the correction term), generally leaving 2-cycles behind.  ``reduce`` then
splits off a trivial part -- pairs of arrows multiplying to an invertible
quadratic form -- by an explicit chain of arrow substitutions, which is
returned so the caller can audit or replay it.  ``qp_mutate`` is the
composite, and refuses (loudly) when reduction cannot clear the 2-cycles;
that refusal is the standard witness of a degenerate potential.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _product

from .errors import (
    InvalidPotential,
    InvalidSubstitution,
    NotReduced,
    TwoCycleObstruction,
    VertexOutOfRange,
)
from .linalg import QQ, rank
from .quiver import Arrow, Quiver, build_quiver, full_subquiver, two_cycle_pairs

__all__ = [
    "DEFAULT_TRUNCATION",
    "Potential",
    "PathCombination",
    "QP",
    "ReductionResult",
    "ProbeReport",
    "normalize_cycle",
    "path_endpoints",
    "cyclic_derivative",
    "apply_right_equivalence",
    "restrict",
    "direct_sum",
    "premutate",
    "reduce",
    "qp_mutate",
    "nondegeneracy_probe",
]

Path = tuple[str, ...]

DEFAULT_TRUNCATION = 12


def _coeff(x) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidPotential(f"bad coefficient {x!r}") from exc


def path_endpoints(q: Quiver, ids: Path) -> tuple[int, int]:
    """(source, target) of a composable arrow-id tuple; raises if broken."""
    if not ids:
        raise InvalidPotential("the empty path has no endpoints")
    arrows = [q.arrow(i) for i in ids]
    for u, v in zip(arrows, arrows[1:]):
        if u.tgt != v.src:
            raise InvalidPotential(f"arrows {u.id!r} and {v.id!r} do not compose (got {u.tgt} -> {v.src})")
    return arrows[0].src, arrows[-1].tgt


def normalize_cycle(ids) -> Path:
    """Lexicographically smallest rotation -- the stored form of a cycle."""
    t = tuple(ids)
    return min(t[i:] + t[:i] for i in range(len(t)))


class Potential:
    """A finite rational linear combination of cycles, keyed by normalized rotation.

    Cycles longer than ``truncation`` are dropped on construction and the
    drop is recorded in ``dropped`` -- the formal series model is only
    faithful below the cap.
    """

    __slots__ = ("terms", "truncation", "dropped")

    def __init__(
        self,
        terms: dict[Path, Fraction] | None = None,
        truncation: int = DEFAULT_TRUNCATION,
        dropped: bool = False,
    ):
        if not isinstance(truncation, int) or truncation < 1:
            raise InvalidPotential(f"truncation degree must be a positive integer, got {truncation!r}")
        self.truncation = truncation
        kept: dict[Path, Fraction] = {}
        for k, v in (terms or {}).items():
            if v == 0:
                continue
            if len(k) > truncation:
                dropped = True
                continue
            kept[k] = v
        self.terms = kept
        self.dropped = dropped

    @classmethod
    def build(cls, quiver: Quiver, specs, truncation: int = DEFAULT_TRUNCATION) -> "Potential":
        """From an iterable of ``(coefficient, arrow-id sequence)`` pairs."""
        acc: dict[Path, Fraction] = {}
        for coeff, ids in specs:
            ids = tuple(ids)
            s, t = path_endpoints(quiver, ids)
            if s != t:
                raise InvalidPotential(f"term {ids!r} is a path from {s} to {t}, not a cycle")
            key = normalize_cycle(ids)
            acc[key] = acc.get(key, Fraction(0)) + _coeff(coeff)
        return cls(acc, truncation=truncation)

    def coefficient(self, ids) -> Fraction:
        return self.terms.get(normalize_cycle(ids), Fraction(0))

    def items(self):
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> list[int]:
        return sorted({len(k) for k in self.terms})

    def scaled(self, c) -> "Potential":
        c = _coeff(c)
        return Potential(
            {k: v * c for k, v in self.terms.items()},
            truncation=self.truncation,
            dropped=self.dropped,
        )

    def __add__(self, other: "Potential") -> "Potential":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return Potential(
            acc,
            truncation=min(self.truncation, other.truncation),
            dropped=self.dropped or other.dropped,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Potential)
            and self.terms == other.terms
            and self.truncation == other.truncation
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "Potential(0)"
        bits = " + ".join(f"{v}*{'.'.join(k)}" for k, v in self.items())
        return f"Potential({bits})"


class PathCombination:
    """A rational combination of parallel paths (all sharing source and target)."""

    __slots__ = ("src", "tgt", "terms")

    def __init__(self, src: int, tgt: int, terms: dict[Path, Fraction] | None = None):
        self.src = src
        self.tgt = tgt
        self.terms: dict[Path, Fraction] = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def single(cls, quiver: Quiver, ids, coeff=1) -> "PathCombination":
        ids = tuple(ids)
        s, t = path_endpoints(quiver, ids)
        return cls(s, t, {ids: _coeff(coeff)})

    def add(self, ids, coeff) -> None:
        ids = tuple(ids)
        c = self.terms.get(ids, Fraction(0)) + _coeff(coeff)
        if c == 0:
            self.terms.pop(ids, None)
        else:
            self.terms[ids] = c

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PathCombination)
            and (self.src, self.tgt) == (other.src, other.tgt)
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        bits = " + ".join(f"{v}*{'.'.join(k)}" for k, v in self.items()) or "0"
        return f"PathCombination({self.src}->{self.tgt}: {bits})"


@dataclass(frozen=True, eq=False)
class QP:
    """A quiver together with a potential whose terms live on it."""

    quiver: Quiver
    potential: Potential

    def __post_init__(self):
        for ids in self.potential.terms:
            s, t = path_endpoints(self.quiver, ids)
            if s != t:
                raise InvalidPotential(f"potential term {ids!r} is not a cycle")

    @property
    def is_reduced(self) -> bool:
        """No quadratic part: every surviving term has length at least three."""
        return all(len(ids) >= 3 for ids in self.potential.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QP)
            and self.quiver.b == other.quiver.b
            and {a.id: (a.src, a.tgt) for a in self.quiver.arrows}
            == {a.id: (a.src, a.tgt) for a in other.quiver.arrows}
            and self.potential == other.potential
        )


def cyclic_derivative(qp: QP, arrow_id: str) -> PathCombination:
    """Sum over occurrences: each ``w = u . arrow . v`` contributes ``v . u``.

    The result runs from the arrow's target back to its source.
    """
    a = qp.quiver.arrow(arrow_id)
    out = PathCombination(a.tgt, a.src)
    for w, c in qp.potential.terms.items():
        for m, x in enumerate(w):
            if x == arrow_id:
                out.add(w[m + 1 :] + w[:m], c)
    return out


# ---------------------------------------------------------------------------
# right-equivalence


def _check_substitution(qp: QP, subst: dict[str, PathCombination]) -> None:
    q = qp.quiver
    by_pair: dict[tuple[int, int], list[Arrow]] = {}
    for a in q.arrows:
        by_pair.setdefault((a.src, a.tgt), []).append(a)
    touched_pairs = set()
    for aid, image in subst.items():
        a = q.arrow(aid)
        if (image.src, image.tgt) != (a.src, a.tgt):
            raise InvalidSubstitution(
                f"image of {aid!r} runs {image.src}->{image.tgt}, the arrow runs {a.src}->{a.tgt}"
            )
        for ids in image.terms:
            s, t = path_endpoints(q, ids)
            if (s, t) != (a.src, a.tgt):
                raise InvalidSubstitution(f"image term {ids!r} of {aid!r} is not parallel to it")
        touched_pairs.add((a.src, a.tgt))
    # the degree-1 part must be invertible on each touched parallel class
    for pair in touched_pairs:
        arrows = by_pair[pair]
        idx = {a.id: i for i, a in enumerate(arrows)}
        mat = []
        for a in arrows:
            row = [Fraction(0)] * len(arrows)
            if a.id in subst:
                for ids, c in subst[a.id].terms.items():
                    if len(ids) == 1:
                        row[idx[ids[0]]] = c
            else:
                row[idx[a.id]] = Fraction(1)
            mat.append(row)
        if rank(mat, QQ) != len(arrows):
            raise InvalidSubstitution(
                f"substitution is not invertible on the arrows {pair[0]}->{pair[1]}"
            )


def _expand_path(subst: dict[str, PathCombination], ids: Path) -> dict[Path, Fraction]:
    """Image of one path under an arrow substitution, multilinearly expanded."""
    choices = []
    for aid in ids:
        img = subst.get(aid)
        if img is None:
            choices.append([((aid,), Fraction(1))])
        else:
            choices.append(list(img.terms.items()))
    out: dict[Path, Fraction] = {}
    for combo in _product(*choices):
        path: Path = ()
        coeff = Fraction(1)
        for seg, c in combo:
            path += seg
            coeff *= c
        out[path] = out.get(path, Fraction(0)) + coeff
    return out


def apply_right_equivalence(qp: QP, subst: dict[str, PathCombination]) -> QP:
    """Transform the potential by an invertible arrow substitution.

    Every image must be a combination of paths parallel to its arrow, and the
    length-1 parts must form an invertible change of basis on each parallel
    class.  The quiver itself is unchanged.
    """
    _check_substitution(qp, subst)
    acc: dict[Path, Fraction] = {}
    for w, c in qp.potential.terms.items():
        for path, x in _expand_path(subst, w).items():
            key = normalize_cycle(path)
            acc[key] = acc.get(key, Fraction(0)) + c * x
    return QP(
        qp.quiver,
        Potential(acc, truncation=qp.potential.truncation, dropped=qp.potential.dropped),
    )


# ---------------------------------------------------------------------------
# restriction and direct sum


def restrict(qp: QP, vertices: list[int]) -> QP:
    """Full-subquiver restriction; keeps exactly the terms all of whose arrows survive."""
    sub = full_subquiver(qp.quiver, vertices)
    keep = {a.id for a in sub.arrows}
    terms = {w: c for w, c in qp.potential.terms.items() if all(x in keep for x in w)}
    return QP(
        sub,
        Potential(terms, truncation=qp.potential.truncation, dropped=qp.potential.dropped),
    )


def direct_sum(qp1: QP, qp2: QP) -> QP:
    """Combine two quivers-with-potential living on the same vertex set.

    Arrow sets must be disjoint; arrows are pooled and the potentials added.
    This is the splitting used when peeling a trivial quadratic part off a
    potential, so both summands see every vertex.
    """
    if qp1.quiver.n != qp2.quiver.n:
        raise InvalidPotential(
            f"summands live on different vertex sets ({qp1.quiver.n} vs {qp2.quiver.n} vertices)"
        )
    ids1 = {a.id for a in qp1.quiver.arrows}
    clash = sorted(ids1 & {a.id for a in qp2.quiver.arrows})
    if clash:
        raise InvalidPotential(f"summands share arrow ids: {clash}")
    arrows = [(a.id, a.src, a.tgt) for a in qp1.quiver.arrows] + [
        (a.id, a.src, a.tgt) for a in qp2.quiver.arrows
    ]
    labels = list(qp1.quiver.labels) if qp1.quiver.labels else None
    q = build_quiver(arrows=arrows, n=qp1.quiver.n, labels=labels)
    return QP(q, qp1.potential + qp2.potential)


# ---------------------------------------------------------------------------
# premutation


def premutate(qp: QP, k: int) -> QP:
    """Local surgery at vertex ``k``: composites, reversals, correction term.

    For each length-2 passage ``p . q`` through ``k`` a composite arrow
    ``[pq]`` appears and replaces the passage inside every potential term;
    arrows touching ``k`` are replaced by reversed ones; and the sum of
    ``[pq] . q* . p*`` over all passages is added.  The result usually has
    2-cycles and is meant to be fed to ``reduce``.
    """
    q = qp.quiver
    if not (0 <= k < q.n):
        raise VertexOutOfRange(f"vertex {k} out of range for a quiver on {q.n} vertices")
    incoming = [a for a in q.arrows if a.tgt == k]
    outgoing = [a for a in q.arrows if a.src == k]
    for p in incoming:
        for a in outgoing:
            if a.tgt == p.src:
                raise TwoCycleObstruction(
                    f"vertex {k} lies on a 2-cycle ({p.id!r}, {a.id!r}); mutation is undefined there"
                )
    taken = {a.id for a in q.arrows if a.src != k and a.tgt != k}
    new_arrows: list[tuple[str, int, int]] = [
        (a.id, a.src, a.tgt) for a in q.arrows if a.src != k and a.tgt != k
    ]

    def fresh(candidate: str) -> str:
        while candidate in taken:
            candidate += "'"
        taken.add(candidate)
        return candidate

    star: dict[str, str] = {}
    for a in incoming:
        star[a.id] = fresh(a.id + "*")
        new_arrows.append((star[a.id], k, a.src))
    for a in outgoing:
        star[a.id] = fresh(a.id + "*")
        new_arrows.append((star[a.id], a.tgt, k))
    comp: dict[tuple[str, str], str] = {}
    for p in incoming:
        for r in outgoing:
            comp[(p.id, r.id)] = fresh(f"[{p.id}{r.id}]")
            new_arrows.append((comp[(p.id, r.id)], p.src, r.tgt))
    nq = build_quiver(arrows=new_arrows, n=q.n, labels=list(q.labels) if q.labels else None)

    terms: dict[Path, Fraction] = {}
    for w, c in qp.potential.terms.items():
        # rotate so the cycle does not begin at k, then contract passages
        rot = 0
        while q.arrow(w[rot]).src == k:
            rot += 1
        w = w[rot:] + w[:rot]
        out: list[str] = []
        m = 0
        while m < len(w):
            a = q.arrow(w[m])
            if a.tgt == k:
                out.append(comp[(w[m], w[m + 1])])
                m += 2
            else:
                out.append(w[m])
                m += 1
        key = normalize_cycle(tuple(out))
        terms[key] = terms.get(key, Fraction(0)) + c
    for p in incoming:
        for r in outgoing:
            key = normalize_cycle((comp[(p.id, r.id)], star[r.id], star[p.id]))
            terms[key] = terms.get(key, Fraction(0)) + 1
    return QP(
        nq,
        Potential(terms, truncation=qp.potential.truncation, dropped=qp.potential.dropped),
    )


# ---------------------------------------------------------------------------
# reduction (splitting off the trivial part)


@dataclass
class ReductionResult:
    reduced: QP
    trivial_pairs: list[tuple[str, str]]
    substitutions: list[dict[str, PathCombination]]
    rounds: int


def reduce(qp: QP, max_rounds: int | None = None) -> ReductionResult:
    """Split a QP into trivial pairs plus a part free of length-2 terms.

    First the length-2 terms are diagonalized by Gaussian elimination on each
    parallel class (arrow substitutions, recorded).  Then each longer term
    still touching a trivial arrow is cancelled by correcting that arrow's
    partner with the complementary piece of the cycle; every round strictly
    raises the smallest offending degree, so a potential that reduces at all
    does so within its truncation degree -- the default round cap -- and
    overrunning raises ``NotReduced``.

    The reduced QP keeps every vertex but drops the trivial arrows and
    carries exactly the surviving terms of length >= 3.
    """
    if max_rounds is None:
        max_rounds = qp.potential.truncation
    work = qp
    subs_log: list[dict[str, PathCombination]] = []
    trivial_ids: set[str] = set()
    trivial_pairs: list[tuple[str, str]] = []
    quiver = qp.quiver

    def apply(subst: dict[str, PathCombination]) -> None:
        nonlocal work
        work = apply_right_equivalence(work, subst)
        subs_log.append(subst)

    # stage 1: make the length-2 part a sum of disjoint unit pairs
    while True:
        deg2 = sorted(w for w in work.potential.terms if len(w) == 2)
        pivot = next((w for w in deg2 if not set(w) & trivial_ids), None)
        if pivot is None:
            break
        a, b = pivot
        c = work.potential.terms[pivot]
        if c != 1:
            apply({a: PathCombination.single(quiver, (a,), Fraction(1) / c)})
        row: dict[str, Fraction] = {}
        col: dict[str, Fraction] = {}
        for w, cw in work.potential.terms.items():
            if len(w) != 2 or w == pivot:
                continue
            if a in w:
                row[w[0] if w[1] == a else w[1]] = cw
            elif b in w:
                col[w[0] if w[1] == b else w[1]] = cw
        subst: dict[str, PathCombination] = {}
        if row:
            img = PathCombination.single(quiver, (b,))
            for y, cy in row.items():
                img.add((y,), -cy)
            subst[b] = img
        if col:
            img = PathCombination.single(quiver, (a,))
            for x, cx in col.items():
                img.add((x,), -cx)
            subst[a] = img
        if subst:
            apply(subst)
        trivial_ids.update(pivot)
        trivial_pairs.append(pivot)

    # stage 2: push trivial arrows out of the longer terms
    partner = {}
    for t, u in trivial_pairs:
        partner[t] = u
        partner[u] = t
    rounds = 0
    while True:
        offending = [
            (w, c)
            for w, c in work.potential.terms.items()
            if len(w) >= 3 and any(x in trivial_ids for x in w)
        ]
        if not offending:
            break
        if rounds >= max_rounds:
            raise NotReduced(
                f"splitting did not stabilize within {max_rounds} rounds; "
                "the potential may not reduce to a polynomial"
            )
        d = min(len(w) for w, _ in offending)
        corrections: dict[str, PathCombination] = {}
        for w, c in offending:
            if len(w) != d:
                continue
            m = next(i for i, x in enumerate(w) if x in trivial_ids)
            u = partner[w[m]]
            rho = w[m + 1 :] + w[:m]
            img = corrections.get(u)
            if img is None:
                img = PathCombination.single(quiver, (u,))
                corrections[u] = img
            img.add(rho, -c)
        apply(corrections)
        rounds += 1

    # split
    for w, c in work.potential.terms.items():
        if len(w) == 2:
            if tuple(w) not in [tuple(p) for p in trivial_pairs] or c != 1:
                raise NotReduced(f"stray length-2 term {w!r} survived diagonalization")
    keep_arrows = [(a.id, a.src, a.tgt) for a in quiver.arrows if a.id not in trivial_ids]
    red_quiver = build_quiver(
        arrows=keep_arrows, n=quiver.n, labels=list(quiver.labels) if quiver.labels else None
    )
    red_terms = {w: c for w, c in work.potential.terms.items() if len(w) >= 3}
    red_pot = Potential(
        red_terms, truncation=qp.potential.truncation, dropped=work.potential.dropped
    )
    return ReductionResult(
        reduced=QP(red_quiver, red_pot),
        trivial_pairs=trivial_pairs,
        substitutions=subs_log,
        rounds=rounds,
    )


def qp_mutate(qp: QP, k: int, max_rounds: int | None = None) -> QP:
    """Mutate at ``k``: premutation followed by reduction.

    Raises ``TwoCycleObstruction`` when 2-cycles survive reduction -- the
    witness that the potential is degenerate at this vertex.  On success the
    result's exchange matrix agrees with plain quiver mutation.
    """
    red = reduce(premutate(qp, k), max_rounds=max_rounds)
    leftover = two_cycle_pairs(red.reduced.quiver)
    if leftover:
        raise TwoCycleObstruction(
            f"mutation at vertex {k} is degenerate: 2-cycles survive reduction on vertex pairs {leftover}"
        )
    return red.reduced


@dataclass
class ProbeReport:
    tried: int
    failures: list[tuple[tuple[int, ...], str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def nondegeneracy_probe(qp: QP, depth: int = 4, trials: int = 32, seed: int = 0) -> ProbeReport:
    """Run ``trials`` random mutation sequences of length <= ``depth``.

    Sequences avoid immediately repeating a vertex (that step is a no-op
    round trip).  A failure -- surviving 2-cycles or a non-stabilizing
    reduction -- is recorded with its sequence and is evidence of degeneracy;
    an all-clear is only evidence, not proof, of nondegeneracy.  Deterministic
    given ``(seed, depth, trials)``.
    """
    n = qp.quiver.n
    rng = random.Random(seed)
    failures: list[tuple[tuple[int, ...], str]] = []
    tried = 0
    for _ in range(trials):
        length = rng.randint(1, max(1, depth))
        cur = qp
        seq: tuple[int, ...] = ()
        for _ in range(length):
            choices = [k for k in range(n) if not (seq and seq[-1] == k)]
            if not choices:
                break
            k = rng.choice(choices)
            seq += (k,)
            tried += 1
            try:
                cur = qp_mutate(cur, k)
            except (TwoCycleObstruction, NotReduced) as exc:
                failures.append((seq, str(exc)))
                break
    return ProbeReport(tried=tried, failures=failures)
