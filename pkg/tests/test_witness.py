"""Witness pipeline: roots, theta synthesis, families, lifting, end-to-end.

Expected values below were computed independently before this module was
written: null roots from the kernel of 2*Id - adjacency, the square's
stability vector by brute-force shell search, census counts by exhaustive
enumeration with hom-based deduplication (they equal the projective-line
point counts p + 1 on the double-arrow core, as they must).
"""

import itertools

import pytest

from qpw.classify import affine_graph, dynkin_graph
from qpw.errors import (
    BadInput,
    CapExceeded,
    InvalidQuiver,
    LiftVerificationError,
    NotReduced,
    ThetaInfeasible,
)
from qpw.jacobian import truncated_quotient
from qpw.linalg import GF, QQ
from qpw.qp import QP, Potential, restrict
from qpw.quiver import build_quiver
from qpw.reps import Representation, check_module, hom_space, is_brick, is_stable
from qpw.witness import (
    StableFamily,
    WitnessOptions,
    build_family_affine_A,
    build_family_kronecker,
    closed_vertex_subsets,
    defect_theta,
    evidence_enumeration,
    lift,
    null_root,
    run_witness,
    synthesize_theta,
)


def from_edges(edges, n):
    return build_quiver(arrows=[(f"e{i}", u, v) for i, (u, v) in enumerate(edges)], n=n)


def zero_qp(quiver, truncation=8):
    return QP(quiver, Potential({}, truncation=truncation))


K2 = build_quiver(arrows=[("a", 0, 1), ("b", 0, 1)], n=2)
K3 = build_quiver(arrows=[("a", 0, 1), ("b", 0, 1), ("c", 0, 1)], n=2)
TWO_ONE = build_quiver(arrows=[("a", 0, 1), ("b", 0, 1), ("c", 1, 2)], n=3)
SQUARE = build_quiver(arrows=[("p", 0, 1), ("q", 1, 2), ("r", 3, 2), ("s", 0, 3)], n=4)
TRI = build_quiver(arrows=[("a", 0, 1), ("b", 1, 2), ("c", 2, 0)], n=3)
D4T = build_quiver(arrows=[(f"e{i}", i, 4) for i in range(4)], n=5)  # four leaves into a hub


# ---------------------------------------------------------------- null roots


def test_null_root_frozen_values():
    assert null_root(from_edges(affine_graph("A", 1), 2)) == (1, 1)
    assert null_root(from_edges(affine_graph("A", 3), 4)) == (1, 1, 1, 1)
    assert null_root(from_edges(affine_graph("D", 4), 5)) == (1, 1, 1, 1, 2)
    # orientation is irrelevant
    assert null_root(SQUARE) == (1, 1, 1, 1)
    assert null_root(D4T) == (1, 1, 1, 1, 2)


def test_null_root_rejects_non_affine():
    with pytest.raises(InvalidQuiver):
        null_root(from_edges(dynkin_graph("A", 3), 3))  # definite: kernel 0
    with pytest.raises(InvalidQuiver):
        null_root(K3)  # indefinite
    two_comp = build_quiver(
        arrows=[("a", 0, 1), ("b", 0, 1), ("c", 2, 3), ("d", 2, 3)], n=4
    )
    with pytest.raises(InvalidQuiver):
        null_root(two_comp)  # two null directions


# ------------------------------------------------------------ theta synthesis


def test_synthesize_theta_golden_pair():
    assert synthesize_theta((1, 1), {(0, 1)}) == (1, -1)
    with pytest.raises(ThetaInfeasible):
        synthesize_theta((1, 1), {(0, 1), (1, 0)})


def test_synthesize_theta_square():
    forb = closed_vertex_subsets(SQUARE)
    assert forb == [(0, 0, 1, 0), (0, 0, 1, 1), (0, 1, 1, 0), (0, 1, 1, 1)]
    assert synthesize_theta((1, 1, 1, 1), forb) == (1, 0, -1, 0)


def test_synthesize_theta_validates_and_bounds():
    with pytest.raises(BadInput):
        synthesize_theta((1, 1), {(1, 0, 0)})
    with pytest.raises(ThetaInfeasible):
        # needs theta_0 <= -1 and theta_0 >= 1 simultaneously
        synthesize_theta((1, 1), {(1, 0), (0, 1), (1, 1)}, bound=6)
    # bound too small to reach the solution shell
    with pytest.raises(ThetaInfeasible):
        synthesize_theta((2, 1), {(0, 1)}, bound=0)
    assert synthesize_theta((2, 1), {(0, 1)}) == (1, -2)


# ------------------------------------------------------------ exact families


def test_kronecker_family_shape_and_members():
    fam = build_family_kronecker(3, 4)
    assert fam.kind == "exactFamily"
    assert fam.d == (1, 1) and fam.theta_core == (1, -1)
    assert [p for p, _ in fam.instances] == [1, 2, 3, 4]
    ids = sorted(a.id for a in fam.core_qp.quiver.arrows)
    for lam, m in fam.instances:
        assert m.mats[ids[0]] == [[1]]
        assert m.mats[ids[1]] == [[lam]]
        assert m.mats[ids[2]] == [[0]]
    # independent re-verification of the family invariants
    for _, m in fam.instances:
        assert is_stable(m, fam.theta_core) and is_brick(m)
    for (_, m1), (_, m2) in itertools.combinations(fam.instances, 2):
        assert hom_space(m1, m2)[0] == 0


def test_kronecker_family_validation():
    with pytest.raises(BadInput):
        build_family_kronecker(1, 5)
    with pytest.raises(BadInput):
        build_family_kronecker(2, 1)
    with pytest.raises(BadInput):
        build_family_kronecker(3, 5, core=zero_qp(K2))  # arrow count mismatch


def test_affine_a_family_on_the_square():
    fam = build_family_affine_A(zero_qp(SQUARE), 5)
    assert fam.kind == "exactFamily"
    assert fam.d == (1, 1, 1, 1)
    assert fam.theta_core == (1, 0, -1, 0)
    assert len(fam.instances) == 5
    for lam, m in fam.instances:
        assert m.mats["p"] == [[lam]]  # "p" is the lowest arrow id
        assert m.mats["q"] == [[1]]
        assert is_stable(m, fam.theta_core) and is_brick(m)
    for (_, m1), (_, m2) in itertools.combinations(fam.instances, 2):
        assert hom_space(m1, m2)[0] == 0


def test_affine_a_family_rejects_wrong_shapes():
    cyclic = build_quiver(arrows=[("a", 0, 1), ("b", 1, 2), ("c", 2, 0)], n=3)
    with pytest.raises(InvalidQuiver):
        build_family_affine_A(zero_qp(cyclic), 5)
    with pytest.raises(BadInput):
        build_family_affine_A(zero_qp(TWO_ONE), 5)  # not a cycle graph
    # a 2-vertex parallel pair delegates to the parallel-arrow builder
    fam = build_family_affine_A(zero_qp(K2), 3)
    assert fam.kind == "exactFamily" and len(fam.instances) == 3


# ---------------------------------------------------------------- evidence


def test_defect_theta_hub():
    assert defect_theta(D4T, (1, 1, 1, 1, 2)) == (1, 1, 1, 1, -2)


def test_evidence_counts_on_the_double_arrow():
    report, classes = evidence_enumeration(zero_qp(K2), (1, 1), (1, -1))
    # true counts: the stable classes are the points of the projective line
    assert report.counts == {"F2": 3, "F3": 4, "F5": 6}
    assert report.skipped == {}
    assert len(classes["F5"]) == 6
    for m in classes["F3"]:
        assert is_stable(m, (1, -1)) and is_brick(m)


def test_evidence_monotone_growth():
    report, _ = evidence_enumeration(zero_qp(K2), (1, 1), (1, -1))
    assert report.counts["F2"] <= report.counts["F3"] <= report.counts["F5"]


def test_evidence_dynkin_is_bounded():
    a2 = build_quiver(arrows=[("a", 0, 1)], n=2)
    report, _ = evidence_enumeration(zero_qp(a2), (1, 1), (1, -1))
    assert all(c == 1 for c in report.counts.values())


def test_evidence_budget_skips_and_cap():
    report, _ = evidence_enumeration(zero_qp(K2), (1, 1), (1, -1), budget=10)
    assert set(report.counts) == {"F2", "F3"}  # 2^2 and 3^2 fit, 5^2 = 25 does not
    assert "F5" in report.skipped
    with pytest.raises(CapExceeded):
        evidence_enumeration(zero_qp(K2), (1, 1), (1, -1), budget=3)
    with pytest.raises(BadInput):
        evidence_enumeration(zero_qp(K2), (1, 1), (1, 1))  # theta . d != 0


# ------------------------------------------------------------------- lifting


def test_lift_golden_double_arrow_with_tail():
    target = zero_qp(TWO_ONE)
    fam = build_family_kronecker(2, 3, core=restrict(target, [0, 1]))
    theta, lifted, flags = lift(fam, [0, 1], target)
    assert theta == (1, -1, 0)
    assert flags == (True, True, True)
    for lam, m in lifted:
        assert m.dims == (1, 1, 0)
        assert m.mats["c"] == []  # 0x1 zero block on the tail arrow
        assert is_stable(m, theta) and is_brick(m)
        assert check_module(truncated_quotient(target, 8), m)


def test_lift_rejects_mismatched_core():
    target = zero_qp(TWO_ONE)
    fam = build_family_kronecker(2, 3)  # standalone core with fresh arrow ids
    with pytest.raises(BadInput):
        lift(fam, [0, 1], target)


def test_lift_catches_unstable_smuggled_instance():
    target = zero_qp(TWO_ONE)
    core = restrict(target, [0, 1])
    bad = Representation(core.quiver, QQ, (1, 1), {"a": [[0]], "b": [[0]]})
    fam = StableFamily(core, (1, 1), (1, -1), "hand-built", ((0, bad),), "exactFamily")
    with pytest.raises(LiftVerificationError):
        lift(fam, [0, 1], target)


# ------------------------------------------------------------------ pipeline


def reverify_certificate(cert, qp):
    """Re-check every emitted instance with direct calls, not pipeline state."""
    algebra = truncated_quotient(qp, cert.options.truncation)
    for _, m in cert.instances:
        assert check_module(algebra, m)
        assert is_stable(m, cert.theta_lifted)
        assert is_brick(m)
    for (_, m1), (_, m2) in itertools.combinations(cert.instances, 2):
        if m1.field is m2.field:
            assert hom_space(m1, m2)[0] == 0


def test_run_witness_triple_arrow():
    qp = zero_qp(K3)
    cert = run_witness(qp)
    assert cert.status == "witness"
    assert cert.classification == "MutationInfinite"
    assert cert.core == (0, 1) and cert.core_kind == "parallelArrows"
    assert cert.theta_lifted == (1, -1)
    assert len(cert.instances) == 5 and all(cert.verified)
    assert cert.probe is not None and cert.probe.ok
    assert len(cert.input_digest) == 64
    reverify_certificate(cert, qp)


def test_run_witness_double_arrow_with_tail():
    qp = zero_qp(TWO_ONE)
    cert = run_witness(qp)
    assert cert.status == "witness"
    assert cert.core == (0, 1)
    assert cert.theta_lifted == (1, -1, 0)
    assert [p for p, _ in cert.instances] == [1, 2, 3, 4, 5]
    assert all(m.dims == (1, 1, 0) for _, m in cert.instances)
    reverify_certificate(cert, qp)


def test_run_witness_square():
    qp = zero_qp(SQUARE)
    cert = run_witness(qp)
    assert cert.status == "witness"
    assert cert.classification == "Affine A_3^(1)"
    assert cert.core == (0, 1, 2, 3) and cert.core_kind == "cycle"
    assert cert.theta_lifted == (1, 0, -1, 0)
    assert len(cert.instances) == 5
    reverify_certificate(cert, qp)


def test_run_witness_dynkin_triangle():
    qp = QP(TRI, Potential.build(TRI, [(1, ("a", "b", "c"))], truncation=6))
    cert = run_witness(qp)
    assert cert.status == "no_witness_dynkin"
    assert cert.classification == "Dynkin A_3"
    assert cert.instances == () and cert.family is None
    assert any("no witness expected" in c for c in cert.caveats)


def test_run_witness_refuses_undetermined():
    two_cycle = build_quiver(arrows=[("a", 0, 1), ("b", 1, 0)], n=2)
    cert = run_witness(zero_qp(two_cycle))
    assert cert.status == "refused_undetermined"
    assert any("UndeterminedAtTruncation" in c for c in cert.caveats)


def test_run_witness_gates():
    two_cycle = build_quiver(arrows=[("a", 0, 1), ("b", 1, 0)], n=2)
    not_reduced = QP(two_cycle, Potential.build(two_cycle, [(1, ("a", "b"))], truncation=8))
    with pytest.raises(NotReduced):
        run_witness(not_reduced)
    with pytest.raises(BadInput):
        run_witness(zero_qp(K3), WitnessOptions(k=1))


def test_run_witness_hub_census_evidence():
    cert = run_witness(zero_qp(D4T))
    assert cert.status == "evidence"
    assert cert.classification == "Affine D_4^(1)"
    assert cert.core == (0, 1, 2, 3, 4) and cert.core_kind == "census"
    assert cert.family.kind == "evidenceEnumeration"
    assert cert.evidence.counts == {"F2": 0, "F3": 1}
    assert "F5" in cert.evidence.skipped  # 5^8 exceeds the default budget
    assert len(cert.instances) == 1
    assert cert.instances[0][1].field is GF(3)
    reverify_certificate(cert, zero_qp(D4T))


def test_certificate_json_round():
    cert = run_witness(zero_qp(K3))
    doc = cert.to_json()
    assert doc["status"] == "witness"
    assert doc["core"] == [1, 2]  # 1-based on the wire
    assert doc["thetaLifted"] == [1, -1]
    assert len(doc["instances"]) == 5
    assert doc["instances"][0]["module"]["dims"] == [1, 1]
    assert doc["toolVersion"]
    assert doc["options"]["k"] == 5
    assert doc["family"]["kind"] == "exactFamily"
    assert doc["probe"]["tried"] > 0 and doc["probe"]["failures"] == []
