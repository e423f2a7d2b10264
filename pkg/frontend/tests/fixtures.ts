/** Hand-built wire documents used across the unit tests. */

import type { QPDoc, SessionView, WitnessCertificateDoc } from "../src/api.js";

export const TRIANGLE_QP: QPDoc = {
  n: 3,
  b: [
    [0, 1, -1],
    [-1, 0, 1],
    [1, -1, 0],
  ],
  arrows: [
    { id: "a", src: 1, tgt: 2 },
    { id: "b", src: 2, tgt: 3 },
    { id: "c", src: 3, tgt: 1 },
  ],
  potential: [{ coef: 1, cycle: ["a", "b", "c"] }],
  truncation: 6,
};

export const TRIANGLE_VIEW: SessionView = {
  id: "s-123",
  qp: TRIANGLE_QP,
  classification: "Dynkin A_3",
  twoCycles: [],
  isReduced: true,
  history: [],
  createdAt: "2026-01-01T00:00:00Z",
  touchedAt: "2026-01-01T00:00:00Z",
};

export function viewWith(overrides: Partial<SessionView>): SessionView {
  return { ...TRIANGLE_VIEW, ...overrides };
}

const K3_CORE_QP: QPDoc = {
  n: 2,
  b: [
    [0, 3],
    [-3, 0],
  ],
  arrows: [
    { id: "a1", src: 1, tgt: 2 },
    { id: "a2", src: 1, tgt: 2 },
    { id: "a3", src: 1, tgt: 2 },
  ],
  potential: [],
  truncation: 6,
};

export const WITNESS_CERT: WitnessCertificateDoc = {
  inputDigest: "deadbeef",
  toolVersion: "0.1.0",
  options: { k: 3, truncation: 8 },
  classification: "MutationInfinite",
  status: "witness",
  core: [1, 2],
  coreKind: "wild-multiarrow",
  family: {
    coreQP: K3_CORE_QP,
    d: [1, 1],
    thetaCore: [3, -3],
    parameterSlots: ["t"],
    instances: [
      {
        param: 1,
        module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[1]], a3: [[1]] } },
      },
      {
        param: 2,
        module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[2]], a3: [[4]] } },
      },
      {
        param: 3,
        module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[3]], a3: [[4]] } },
      },
    ],
    kind: "one-parameter",
  },
  thetaLifted: [3, -3],
  instances: [
    {
      param: 1,
      module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[1]], a3: [[1]] } },
    },
    {
      param: 2,
      module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[2]], a3: [[4]] } },
    },
    {
      param: 3,
      module: { field: "F_5", dims: [1, 1], mats: { a1: [[1]], a2: [[3]], a3: [[4]] } },
    },
  ],
  verified: [true, true, true],
  evidence: {
    d: [1, 1],
    theta: [3, -3],
    counts: { F_2: 3, F_3: 4 },
    skipped: { F_5: "budget exceeded" },
  },
  probe: { tried: 24, failures: [] },
  caveats: ["evidence restricted to small fields"],
  diagnostics: [],
};

export const DYNKIN_CERT: WitnessCertificateDoc = {
  inputDigest: "cafe",
  toolVersion: "0.1.0",
  options: { k: 5 },
  classification: "Dynkin A_3",
  status: "no_witness_dynkin",
  core: null,
  coreKind: null,
  family: null,
  thetaLifted: null,
  instances: [],
  verified: [],
  evidence: null,
  probe: null,
  caveats: [],
  diagnostics: ["finite representation type: only finitely many indecomposables exist"],
};
