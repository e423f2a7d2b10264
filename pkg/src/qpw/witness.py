"""Witness pipeline: machine-checked certificates of large stable families.

The question this module answers about a (reduced, Jacobi-finite) quiver
with potential: can we exhibit arbitrarily many pairwise non-isomorphic
stable modules sharing one dimension vector?  The strategy is to locate a
small vertex subset whose restricted quiver already has infinite mutation
behavior (a "core"), build a parametrized family of stable bricks on that
core, then extend every member by zero to the full quiver — and re-verify
each extended module from scratch, because the certificate is only worth
anything if the checks are independent of the construction.

Three core shapes are handled:

* two vertices joined by m >= 2 parallel arrows — a one-parameter family
  in which one arrow scalar runs over 1..k (an exact family, any k);
* a non-cyclically-oriented cycle — the all-ones dimension vector with a
  scalar parameter on one designated arrow, stability vector synthesized
  from the closed-subset constraints (also an exact family);
* anything else affine (tree shapes) — exhaustive enumeration of stable
  bricks over successive prime fields, reported as growth evidence rather
  than an exact family.

Every emitted certificate records the input digest, tool version, options,
classification, probe results, and caveats, so a reader can re-run it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .classify import DEFAULT_BFS_BUDGET, classify, find_non_dynkin_core
from .errors import (
    BadInput,
    QPWError,
    CapExceeded,
    InvalidQuiver,
    LiftVerificationError,
    NotReduced,
    ThetaInfeasible,
)
from .jacobian import TruncatedAlgebra, truncated_quotient
from .linalg import QQ, field_by_name, nullspace, zeros
from .qp import ProbeReport, QP, Potential, nondegeneracy_probe, restrict
from .quiver import Quiver, build_quiver
from .reps import (
    Representation,
    check_module,
    hom_space,
    is_brick,
    is_stable,
    pairing,
)
from .serialize import (
    fraction_to_json,
    qp_digest,
    qp_to_json,
    rep_to_json,
)

__all__ = [
    "StableFamily",
    "EvidenceReport",
    "WitnessOptions",
    "WitnessCertificate",
    "null_root",
    "synthesize_theta",
    "build_family_kronecker",
    "build_family_affine_A",
    "lift",
    "evidence_enumeration",
    "run_witness",
]

EVIDENCE_FIELDS = ("F2", "F3", "F5")
EVIDENCE_ENUM_BUDGET = 100_000  # max representations enumerated per field
CLOSED_SUBSET_LIMIT = 20  # cycle length above which 2^n subset scans stop


# ---------------------------------------------------------------------------
# root combinatorics


def null_root(q: Quiver) -> tuple[int, ...]:
    """Primitive positive generator of the radical of the symmetrized form.

    Builds ``2*Id - adjacency`` (arrow multiplicities counted, orientation
    ignored) and demands a one-dimensional kernel spanned by a strictly
    positive vector — the signature of an affine diagram.  Anything else
    (Dynkin: zero kernel; wild or disconnected: wrong shape) is rejected.
    """
    n = q.n
    adj = [[0] * n for _ in range(n)]
    for a in q.arrows:
        adj[a.src][a.tgt] += 1
        adj[a.tgt][a.src] += 1
    m = [
        [Fraction((2 if i == j else 0) - adj[i][j]) for j in range(n)]
        for i in range(n)
    ]
    kernel = nullspace(m, QQ)
    if len(kernel) != 1:
        raise InvalidQuiver(
            f"radical of the symmetrized form is {len(kernel)}-dimensional; "
            "a connected affine diagram has exactly one null direction"
        )
    vec = kernel[0]
    scale = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * scale) for x in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise InvalidQuiver("null direction is not strictly positive; not an affine diagram")
    return tuple(ints)


def synthesize_theta(
    d: tuple[int, ...],
    forbidden: set[tuple[int, ...]] | list[tuple[int, ...]],
    bound: int | None = None,
) -> tuple[int, ...]:
    """Smallest integer stability vector separating ``d`` from ``forbidden``.

    Finds theta with ``theta . d = 0`` and ``theta . e <= -1`` for every
    forbidden dimension vector ``e``, searching max-norm shells 0, 1, 2, ...
    up to ``bound`` (default ``2 * len(d)``) and, inside a shell, taking the
    lexicographically first solution.  The enumeration prunes on the running
    ``theta . d`` partial sum, so all-ones vectors on a dozen vertices stay
    fast.  Raises ThetaInfeasible when the bound is exhausted.
    """
    n = len(d)
    if n == 0 or any(x < 0 for x in d):
        raise BadInput("dimension vector must be non-empty and non-negative")
    forb = sorted(set(map(tuple, forbidden)))
    for e in forb:
        if len(e) != n:
            raise BadInput(f"forbidden vector {e} has wrong length (expected {n})")
    bound = 2 * n if bound is None else bound
    if bound < 0:
        raise BadInput("search bound must be non-negative")

    # suffix_reach[i] = max |contribution| of coordinates i.. to theta . d
    def search(shell: int) -> tuple[int, ...] | None:
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + shell * d[i]
        theta = [0] * n

        def place(i: int, dot: int, hit_shell: bool) -> tuple[int, ...] | None:
            if i == n:
                if dot != 0 or not hit_shell:
                    return None
                for e in forb:
                    if sum(t * x for t, x in zip(theta, e)) > -1:
                        return None
                return tuple(theta)
            for t in range(-shell, shell + 1):
                nd = dot + t * d[i]
                if abs(nd) > suffix[i + 1]:
                    continue
                theta[i] = t
                got = place(i + 1, nd, hit_shell or abs(t) == shell)
                if got is not None:
                    return got
            return None

        return place(0, 0, shell == 0)

    for shell in range(bound + 1):
        got = search(shell)
        if got is not None:
            return got
    raise ThetaInfeasible(
        f"no integer stability vector with entries bounded by {bound} separates "
        f"{d} from {len(forb)} forbidden dimension vectors"
    )


def closed_vertex_subsets(q: Quiver) -> list[tuple[int, ...]]:
    """Indicator vectors of proper nonzero vertex sets closed under arrows.

    These are exactly the dimension vectors of submodules of a thin sincere
    module all of whose arrow scalars are nonzero, which is why the theta
    synthesized against them makes every such module stable at once.
    """
    if q.n > CLOSED_SUBSET_LIMIT:
        raise CapExceeded(f"closed-subset scan is exponential; {q.n} vertices exceeds {CLOSED_SUBSET_LIMIT}")
    out = []
    for bits in range(1, 2**q.n - 1):
        members = {v for v in range(q.n) if bits >> v & 1}
        if all(a.tgt in members for a in q.arrows if a.src in members):
            out.append(tuple(1 if v in members else 0 for v in range(q.n)))
    return sorted(out)


# ---------------------------------------------------------------------------
# stable families


@dataclass(frozen=True)
class StableFamily:
    """A verified batch of pairwise non-isomorphic stable bricks on a core.

    ``instances`` pairs each parameter value with its module; ``kind`` is
    "exactFamily" when the parameter runs over an a-priori unbounded scalar
    range and "evidenceEnumeration" when the batch is an exhaustive census
    over finite fields.  Construction helpers re-check every invariant
    (stability, brick, pairwise Hom = 0) before an instance is admitted.
    """

    core_qp: QP
    d: tuple[int, ...]
    theta_core: tuple[int, ...]
    parameter_slots: str
    instances: tuple[tuple[Any, Representation], ...]
    kind: str

    def to_json(self) -> dict[str, Any]:
        return {
            "coreQP": qp_to_json(self.core_qp),
            "d": list(self.d),
            "thetaCore": list(self.theta_core),
            "parameterSlots": self.parameter_slots,
            "kind": self.kind,
            "instances": [
                {"param": _param_to_json(p), "module": rep_to_json(m)}
                for p, m in self.instances
            ],
        }


def _param_to_json(p: Any) -> Any:
    if isinstance(p, (int, str)):
        return p
    if isinstance(p, Fraction):
        return fraction_to_json(p)
    return str(p)


def _verify_batch(
    algebra: TruncatedAlgebra,
    instances: list[tuple[Any, Representation]],
    d: tuple[int, ...],
    theta: tuple[int, ...],
    where: str,
) -> None:
    """From-scratch checks every certificate instance must pass."""
    for param, m in instances:
        if m.dims != tuple(d):
            raise LiftVerificationError(f"{where}: instance {param!r} has dims {m.dims}, wanted {tuple(d)}")
        if not check_module(algebra, m):
            raise LiftVerificationError(f"{where}: instance {param!r} does not satisfy the relations")
        if not is_stable(m, theta):
            raise LiftVerificationError(f"{where}: instance {param!r} is not stable for {theta}")
        if not is_brick(m):
            raise LiftVerificationError(f"{where}: instance {param!r} is not a brick")
    for (p1, m1), (p2, m2) in itertools.combinations(instances, 2):
        if m1.field is m2.field and hom_space(m1, m2)[0] > 0:
            raise LiftVerificationError(
                f"{where}: instances {p1!r} and {p2!r} admit a nonzero homomorphism"
            )


def _default_parallel_core(m: int) -> QP:
    q = build_quiver(arrows=[(f"x{i + 1}", 0, 1) for i in range(m)], n=2)
    return QP(q, Potential({}))


def build_family_kronecker(m: int, k: int, core: QP | None = None) -> StableFamily:
    """Exact family on two vertices joined by ``m`` parallel arrows.

    Thin modules (1, 1): the lowest-id arrow acts by 1, the next one by a
    parameter running over 1..k, any remaining arrows act by 0.  The
    stability vector is +1 at the shared source and -1 at the shared sink,
    so the unique proper nonzero submodule (the sink simple) pairs to -1.
    ``k`` is arbitrary — that is the point: the family grows on demand.
    """
    if m < 2:
        raise BadInput("a parallel-arrow core needs at least 2 arrows")
    if k < 2:
        raise BadInput("a family of fewer than 2 instances witnesses nothing")
    qp = _default_parallel_core(m) if core is None else core
    q = qp.quiver
    if q.n != 2 or len(q.arrows) != m:
        raise BadInput(f"core must have 2 vertices and {m} arrows")
    heads = {(a.src, a.tgt) for a in q.arrows}
    if len(heads) != 1:
        raise BadInput("core arrows must all be parallel (no 2-cycles)")
    if not qp.potential.is_zero():
        raise BadInput("a parallel-arrow core carries no cycles, so its potential must vanish")
    (src, tgt) = next(iter(heads))
    theta = tuple(1 if v == src else -1 for v in range(2))
    d = (1, 1)
    ids = sorted(a.id for a in q.arrows)
    instances: list[tuple[Any, Representation]] = []
    for lam in range(1, k + 1):
        mats = {aid: [[0]] for aid in ids}
        mats[ids[0]] = [[1]]
        mats[ids[1]] = [[lam]]
        instances.append((lam, Representation(q, QQ, d, mats)))
    algebra = truncated_quotient(qp, qp.potential.truncation)
    _verify_batch(algebra, instances, d, theta, "parallel-arrow family")
    slots = f"scalar 1..{k} on arrow {ids[1]!r}; arrow {ids[0]!r} pinned to 1"
    if m > 2:
        slots += f"; {m - 2} remaining arrows act by 0"
    return StableFamily(qp, d, theta, slots, tuple(instances), "exactFamily")


def _cycle_shape(q: Quiver) -> bool:
    """Is the underlying graph a single cycle (every vertex of degree 2)?"""
    if len(q.arrows) != q.n or q.n < 2:
        return False
    deg = [0] * q.n
    for a in q.arrows:
        deg[a.src] += 1
        deg[a.tgt] += 1
    if any(x != 2 for x in deg):
        return False
    # degree-2 everywhere with n edges: a disjoint union of cycles; demand one
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for a in q.arrows:
            for w in (a.tgt,) if a.src == v else (a.src,) if a.tgt == v else ():
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return len(seen) == q.n


def build_family_affine_A(core: QP, k: int) -> StableFamily:
    """Exact family on a cycle that is not cyclically oriented.

    All-ones modules: every arrow acts by 1 except the lowest-id arrow,
    which carries a parameter running over 1..k.  Because every scalar is
    nonzero, the proper submodules are exactly the closed vertex subsets,
    and a stability vector separating all of them at once is synthesized
    by bounded search — the same theta works for every parameter value.
    A cyclically oriented cycle is refused (its mutation class is finite,
    and the directed cycle would also support potential terms).
    """
    if k < 2:
        raise BadInput("a family of fewer than 2 instances witnesses nothing")
    q = core.quiver
    if q.n == 2 and len(q.arrows) == 2 and len({(a.src, a.tgt) for a in q.arrows}) == 1:
        return build_family_kronecker(2, k, core)
    if not _cycle_shape(q):
        raise BadInput("core is not a single undirected cycle")
    if all(len(q.arrows_from(v)) == 1 for v in range(q.n)):
        raise InvalidQuiver(
            "cyclically oriented cycle: finite mutation behavior, no stable family here"
        )
    if not core.potential.is_zero():
        raise BadInput("a non-cyclically-oriented cycle has no directed cycles; potential must vanish")
    d = tuple([1] * q.n)
    theta = synthesize_theta(d, closed_vertex_subsets(q))
    ids = sorted(a.id for a in q.arrows)
    designated = ids[0]
    instances: list[tuple[Any, Representation]] = []
    for lam in range(1, k + 1):
        mats = {aid: [[1]] for aid in ids}
        mats[designated] = [[lam]]
        instances.append((lam, Representation(q, QQ, d, mats)))
    algebra = truncated_quotient(core, core.potential.truncation)
    _verify_batch(algebra, instances, d, theta, "cycle family")
    slots = f"scalar 1..{k} on arrow {designated!r}; all other arrows pinned to 1"
    return StableFamily(core, d, theta, slots, tuple(instances), "exactFamily")


# ---------------------------------------------------------------------------
# evidence enumeration


@dataclass(frozen=True)
class EvidenceReport:
    """Exhaustive stable-brick census per prime field.

    ``counts`` maps field name to the number of pairwise non-isomorphic
    stable bricks of the requested dimension vector; ``skipped`` records
    fields whose enumeration would overrun the budget.  Growth of the
    counts along F2 -> F3 -> F5 is the evidence (finite fields cannot show
    an infinitude, only a trend).
    """

    d: tuple[int, ...]
    theta: tuple[int, ...]
    counts: dict[str, int]
    skipped: dict[str, str]

    def to_json(self) -> dict[str, Any]:
        return {
            "d": list(self.d),
            "theta": list(self.theta),
            "counts": dict(self.counts),
            "skipped": dict(self.skipped),
        }


def evidence_enumeration(
    qp: QP,
    d: tuple[int, ...],
    theta: tuple[int, ...],
    fields: tuple[str, ...] = EVIDENCE_FIELDS,
    budget: int = EVIDENCE_ENUM_BUDGET,
) -> tuple[EvidenceReport, dict[str, list[Representation]]]:
    """Count pairwise non-isomorphic stable bricks of ``d`` per prime field.

    Enumerates every matrix tuple (all p^(sum of entry counts) of them),
    keeps those that satisfy the relations, are stable, and are bricks,
    and deduplicates isomorphism classes by the nonzero-Hom test (between
    stable modules of equal dimension vector a nonzero map is invertible).
    Fields whose enumeration exceeds ``budget`` are skipped with a note;
    if every requested field is skipped the call fails loudly instead.
    """
    q = qp.quiver
    if len(d) != q.n or any(x < 0 for x in d):
        raise BadInput("dimension vector does not fit the quiver")
    if pairing(theta, d) != 0:
        raise BadInput("theta must pair to zero with the dimension vector")
    entries = sum(d[a.src] * d[a.tgt] for a in q.arrows)
    algebra = truncated_quotient(qp, qp.potential.truncation)
    counts: dict[str, int] = {}
    skipped: dict[str, str] = {}
    classes: dict[str, list[Representation]] = {}
    shapes = [(a.id, d[a.tgt], d[a.src]) for a in q.arrows]
    for fname in fields:
        f = field_by_name(fname)
        total = f.char**entries
        if total > budget:
            skipped[fname] = f"{f.char}^{entries} representations exceed the budget of {budget}"
            continue
        found: list[Representation] = []
        for flat in itertools.product(range(f.char), repeat=entries):
            mats: dict[str, list[list[Any]]] = {}
            pos = 0
            for aid, rows, cols in shapes:
                mats[aid] = [list(flat[pos + r * cols : pos + (r + 1) * cols]) for r in range(rows)]
                pos += rows * cols
            m = Representation(q, f, d, mats)
            if not check_module(algebra, m):
                continue
            if not is_stable(m, theta):
                continue
            if not is_brick(m):
                continue
            if any(hom_space(m, c)[0] > 0 for c in found):
                continue
            found.append(m)
        counts[fname] = len(found)
        classes[fname] = found
    if not counts:
        raise CapExceeded(
            "every requested field exceeded the enumeration budget: "
            + "; ".join(f"{k}: {v}" for k, v in skipped.items())
        )
    return EvidenceReport(tuple(d), tuple(theta), counts, skipped), classes


def defect_theta(q: Quiver, delta: tuple[int, ...]) -> tuple[int, ...]:
    """Stability vector from the null root: delta_j minus delta of in-neighbors.

    Pairs to zero with ``delta`` (the quadratic form vanishes on the null
    direction) and is negative on dimension vectors of proper submodules of
    the generic modules in the null-root orbit — the classical defect.
    """
    theta = []
    for j in range(q.n):
        s = delta[j]
        for a in q.arrows_into(j):
            s -= delta[a.src]
        theta.append(s)
    got = pairing(tuple(theta), delta)
    if got != 0:
        raise InvalidQuiver(f"defect functional pairs to {got} with the null root; diagram is not affine")
    return tuple(theta)


# ---------------------------------------------------------------------------
# lifting


def lift(
    family: StableFamily,
    core_vertices: list[int] | tuple[int, ...],
    target: QP,
    algebra: TruncatedAlgebra | None = None,
) -> tuple[tuple[int, ...], tuple[tuple[Any, Representation], ...], tuple[bool, ...]]:
    """Zero-extend a core family to the full QP and re-verify every member.

    The stability vector is extended by zeros, each module puts zero spaces
    on the complement (so every arrow touching the complement acts by a
    zero matrix), and then *every* extended instance is re-checked from
    scratch — relations, stability, brick, pairwise Hom — against the full
    algebra.  A failure raises LiftVerificationError and is never swallowed:
    it would mean the certificate is unsound.
    """
    I = sorted(set(core_vertices))
    expected = restrict(target, I)
    if family.core_qp.quiver != expected.quiver:
        raise BadInput("family was not built on the restriction of the target to these vertices")
    if family.core_qp.potential.terms != expected.potential.terms:
        raise BadInput("family core potential disagrees with the restricted target potential")
    n = target.quiver.n
    theta_lifted = [0] * n
    for pos, v in enumerate(I):
        theta_lifted[v] = family.theta_core[pos]
    theta_lifted = tuple(theta_lifted)
    if algebra is None:
        algebra = truncated_quotient(target, target.potential.truncation)
    position = {v: i for i, v in enumerate(I)}
    lifted: list[tuple[Any, Representation]] = []
    for param, m in family.instances:
        dims = tuple(m.dims[position[v]] if v in position else 0 for v in range(n))
        mats: dict[str, list[list[Any]]] = {}
        for a in target.quiver.arrows:
            if a.src in position and a.tgt in position:
                mats[a.id] = [list(row) for row in m.mats[a.id]]
            else:
                mats[a.id] = zeros(dims[a.tgt], dims[a.src], m.field)
        lifted.append((param, Representation(target.quiver, m.field, dims, mats)))
    d_lifted = tuple(family.d[position[v]] if v in position else 0 for v in range(n))
    _verify_batch(algebra, lifted, d_lifted, theta_lifted, "lifted family")
    return theta_lifted, tuple(lifted), tuple(True for _ in lifted)


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class WitnessOptions:
    """Tuning knobs for a witness run; all defaults are desk-scale."""

    k: int = 5
    truncation: int = 8
    probe_depth: int = 4
    probe_trials: int = 32
    probe_seed: int = 0
    evidence_fields: tuple[str, ...] = EVIDENCE_FIELDS
    evidence_budget: int = EVIDENCE_ENUM_BUDGET
    classify_budget: int = DEFAULT_BFS_BUDGET

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "truncation": self.truncation,
            "probeDepth": self.probe_depth,
            "probeTrials": self.probe_trials,
            "probeSeed": self.probe_seed,
            "evidenceFields": list(self.evidence_fields),
            "evidenceBudget": self.evidence_budget,
            "classifyBudget": self.classify_budget,
        }


@dataclass(frozen=True)
class WitnessCertificate:
    """Everything a skeptic needs to re-check a witness run.

    ``status`` is one of:

    * "witness"    — exact family lifted and re-verified (the strong outcome)
    * "evidence"   — per-field census on a core with no exact family shape
    * "no_witness_dynkin"  — finite type, nothing to witness
    * "refused_undetermined" — finite-dimensionality not certified at the
      truncation degree, so downstream claims would be meaningless
    * "failed"     — construction obstructed; see diagnostics
    """

    input_digest: str
    tool_version: str
    options: WitnessOptions
    classification: str
    status: str
    core: tuple[int, ...] | None = None
    core_kind: str | None = None
    family: StableFamily | None = None
    theta_lifted: tuple[int, ...] | None = None
    instances: tuple[tuple[Any, Representation], ...] = ()
    verified: tuple[bool, ...] = ()
    evidence: EvidenceReport | None = None
    probe: ProbeReport | None = None
    caveats: tuple[str, ...] = ()
    diagnostics: tuple[str, ...] = ()

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "inputDigest": self.input_digest,
            "toolVersion": self.tool_version,
            "options": self.options.to_json(),
            "classification": self.classification,
            "status": self.status,
            "core": [v + 1 for v in self.core] if self.core is not None else None,
            "coreKind": self.core_kind,
            "family": self.family.to_json() if self.family else None,
            "thetaLifted": list(self.theta_lifted) if self.theta_lifted else None,
            "instances": [
                {"param": _param_to_json(p), "module": rep_to_json(m)}
                for p, m in self.instances
            ],
            "verified": list(self.verified),
            "evidence": self.evidence.to_json() if self.evidence else None,
            "probe": (
                {
                    "tried": self.probe.tried,
                    "failures": [
                        {"sequence": [v + 1 for v in seq], "reason": reason}
                        for seq, reason in self.probe.failures
                    ],
                }
                if self.probe
                else None
            ),
            "caveats": list(self.caveats),
            "diagnostics": list(self.diagnostics),
        }
        return doc


def run_witness(
    qp: QP,
    options: WitnessOptions | None = None,
    progress: Callable[[str], None] | None = None,
) -> WitnessCertificate:
    """End-to-end witness pipeline on a reduced quiver with potential.

    Classifies the quiver, refuses early when finite-dimensionality of the
    truncated algebra is not certified, emits a no-witness certificate on
    Dynkin input, and otherwise restricts to a smallest non-Dynkin core,
    builds the matching family (parallel arrows / cycle / census), lifts it
    back, and re-verifies everything.  Verification failures propagate —
    they are soundness bugs, not reportable outcomes.

    ``progress`` (when given) receives one human-readable line per stage.
    """
    note = progress or (lambda _line: None)
    opt = options or WitnessOptions()
    if opt.k < 2:
        raise BadInput("need at least 2 instances for a meaningful certificate")
    if not qp.is_reduced:
        raise NotReduced("witness pipeline requires a reduced potential; run the reduction first")
    digest = qp_digest(qp)
    caveats: list[str] = [f"algebra truncated at degree {opt.truncation}"]
    try:
        cls = classify(qp.quiver, budget=opt.classify_budget)
        cls_label = cls.display()
    except QPWError as exc:
        cls, cls_label = None, f"unclassifiable ({exc})"
    note(f"classification: {cls_label}")
    algebra = truncated_quotient(qp, opt.truncation)
    note(f"truncated quotient at degree {opt.truncation}: {algebra.certificate.status}")
    if algebra.certificate.status != "FiniteDim":
        caveats.append(
            "UndeterminedAtTruncation: finite-dimensionality not certified at this degree; "
            "raise the truncation or reduce further"
        )
        return WitnessCertificate(
            digest, __version__, opt, cls_label, "refused_undetermined", caveats=tuple(caveats)
        )
    if cls is None:
        return WitnessCertificate(
            digest,
            __version__,
            opt,
            cls_label,
            "failed",
            caveats=tuple(caveats),
            diagnostics=(f"cannot pick a core without a classification: {cls_label}",),
        )
    if cls.kind == "dynkin":
        caveats.append(
            f"{cls.display()}: finitely many stable classes for every stability vector; "
            "no witness expected"
        )
        return WitnessCertificate(
            digest, __version__, opt, cls_label, "no_witness_dynkin", caveats=tuple(caveats)
        )
    core = find_non_dynkin_core(qp.quiver, budget=opt.classify_budget)
    if core is None:  # unreachable for non-Dynkin input; keep the honest branch
        return WitnessCertificate(
            digest,
            __version__,
            opt,
            cls_label,
            "failed",
            caveats=tuple(caveats),
            diagnostics=("classification is not Dynkin yet no non-Dynkin core was found",),
        )
    note(f"core vertices (1-based): {[v + 1 for v in core]}")
    core_qp = restrict(qp, core)
    probe = nondegeneracy_probe(
        core_qp, depth=opt.probe_depth, trials=opt.probe_trials, seed=opt.probe_seed
    )
    note(f"nondegeneracy probe: tried {probe.tried} steps, {len(probe.failures)} failures")
    if not probe.ok:
        caveats.append(
            f"nondegeneracy probe found {len(probe.failures)} degenerate mutation sequences on the core"
        )
    try:
        family, core_kind, evidence = _build_core_family(core_qp, opt, caveats)
    except (ThetaInfeasible, CapExceeded, InvalidQuiver, BadInput) as exc:
        return WitnessCertificate(
            digest,
            __version__,
            opt,
            cls_label,
            "failed",
            core=tuple(core),
            probe=probe,
            caveats=tuple(caveats),
            diagnostics=(f"{type(exc).__name__}: {exc}",),
        )
    note(f"family route: {core_kind} ({family.kind}), {len(family.instances)} instances")
    theta_lifted, lifted, flags = lift(family, core, qp, algebra)
    note(f"lift re-verified {len(lifted)} instances on the full quiver")
    status = "witness" if family.kind == "exactFamily" else "evidence"
    return WitnessCertificate(
        digest,
        __version__,
        opt,
        cls_label,
        status,
        core=tuple(core),
        core_kind=core_kind,
        family=family,
        theta_lifted=theta_lifted,
        instances=lifted,
        verified=flags,
        evidence=evidence,
        probe=probe,
        caveats=tuple(caveats),
    )


def _build_core_family(
    core_qp: QP, opt: WitnessOptions, caveats: list[str]
) -> tuple[StableFamily, str, EvidenceReport | None]:
    """Pick the family construction matching the core's shape."""
    q = core_qp.quiver
    if q.n == 2:
        return (
            build_family_kronecker(len(q.arrows), opt.k, core_qp),
            "parallelArrows",
            None,
        )
    if _cycle_shape(q):
        try:
            return build_family_affine_A(core_qp, opt.k), "cycle", None
        except ThetaInfeasible as exc:
            caveats.append(
                f"exact cycle family infeasible ({exc}); falling back to census evidence"
            )
    delta = null_root(q)
    theta = defect_theta(q, delta)
    report, classes = evidence_enumeration(
        core_qp, delta, theta, fields=opt.evidence_fields, budget=opt.evidence_budget
    )
    caveats.append(
        "evidence mode: no exact parametrized family for this core shape; "
        "stable-brick counts per finite field stand in as growth evidence"
    )
    best_field = max(report.counts, key=lambda k: (report.counts[k], k))
    instances = tuple((f"{best_field}#{i}", m) for i, m in enumerate(classes[best_field]))
    family = StableFamily(
        core_qp,
        delta,
        theta,
        f"exhaustive census over {', '.join(sorted(report.counts))}; "
        f"instances listed from {best_field}",
        instances,
        "evidenceEnumeration",
    )
    # the census already verified each instance; verify again as a batch for
    # the pairwise-Hom invariant (cheap at census sizes)
    algebra = truncated_quotient(core_qp, core_qp.potential.truncation)
    _verify_batch(algebra, list(instances), delta, theta, "census family")
    return family, "census", report
