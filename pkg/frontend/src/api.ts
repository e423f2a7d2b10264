/**
 * Typed client for the workbench HTTP API.
 *
 * Every piece of mathematics happens on the server; this module only moves
 * JSON documents back and forth.  The raw response text is kept alongside
 * the parsed document so callers can compare bytes with other producers of
 * the same documents (the CLI prints the identical canonical form).
 */

// ---- wire documents (vertices are 1-based everywhere on the wire) ----

export interface ArrowDoc {
  id: string;
  src: number;
  tgt: number;
}

export interface QuiverDoc {
  n: number;
  b: number[][];
  arrows: ArrowDoc[];
  labels?: string[];
}

export interface PotentialTermDoc {
  coef: number | string; // exact integer or "p/q" fraction string
  cycle: string[];
}

export interface QPDoc extends QuiverDoc {
  potential: PotentialTermDoc[];
  truncation: number;
}

export type MutateMode = "quiver" | "qp";

export interface HistoryOp {
  op: "mutate";
  k: number;
  mode: MutateMode;
}

export interface SessionView {
  id: string;
  qp: QPDoc;
  classification: string;
  twoCycles: Array<[number, number]>;
  isReduced: boolean;
  history: HistoryOp[];
  createdAt: string;
  touchedAt: string;
}

export interface ClassifyResult {
  type: string;
  witnessSequence: number[];
  visited: number;
}

export interface ModuleDoc {
  field: string;
  dims: number[];
  mats: Record<string, Array<Array<number | string>>>;
}

export interface FamilyInstanceDoc {
  param: number | string;
  module: ModuleDoc;
}

export interface FamilyDoc {
  coreQP: QPDoc;
  d: number[];
  thetaCore: number[];
  parameterSlots: string[];
  instances: FamilyInstanceDoc[];
  kind: string;
}

export interface EvidenceDoc {
  d: number[];
  theta: number[];
  counts: Record<string, number>;
  skipped: Record<string, string>;
}

export interface ProbeDoc {
  tried: number;
  failures: Array<{ sequence: number[]; reason: string }>;
}

export interface WitnessCertificateDoc {
  inputDigest: string;
  toolVersion: string;
  options: Record<string, unknown>;
  classification: string;
  status:
    | "witness"
    | "evidence"
    | "no_witness_dynkin"
    | "refused_undetermined"
    | "failed";
  core: number[] | null;
  coreKind: string | null;
  family: FamilyDoc | null;
  thetaLifted: number[] | null;
  instances: FamilyInstanceDoc[];
  verified: boolean[];
  evidence: EvidenceDoc | null;
  probe: ProbeDoc | null;
  caveats: string[];
  diagnostics: string[];
}

export interface WitnessOptionsBody {
  k?: number;
  truncation?: number;
  probeDepth?: number;
  probeTrials?: number;
  probeSeed?: number;
  evidenceFields?: string[];
  evidenceBudget?: number;
}

// ---- errors ----

/** A non-2xx answer that carried a machine-readable {error, reason} body. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    public readonly reason: string,
  ) {
    super(`${code}: ${reason}`);
    this.name = "ApiError";
  }
}

/** A transport-level failure (server down, connection dropped). */
export class NetworkError extends Error {
  constructor(public readonly cause_: unknown) {
    super("network failure");
    this.name = "NetworkError";
  }
}

export interface RawResponse {
  status: number;
  text: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  /** Low-level call; exposed so tests can compare exact response bytes. */
  async call(method: string, path: string, body?: unknown): Promise<RawResponse> {
    let res: Response;
    try {
      res = await this.fetchImpl(this.base + path, {
        method,
        headers: body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(err);
    }
    const text = await res.text();
    return { status: res.status, text };
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const raw = await this.call(method, path, body);
    let doc: unknown;
    try {
      doc = JSON.parse(raw.text);
    } catch {
      throw new ApiError(raw.status, "BadResponse", raw.text.slice(0, 200));
    }
    if (raw.status >= 400) {
      const e = doc as { error?: string; reason?: string };
      throw new ApiError(raw.status, e.error ?? "Unknown", e.reason ?? raw.text);
    }
    return doc as T;
  }

  createSession(qp: unknown): Promise<SessionView> {
    return this.json("POST", "/api/session", qp);
  }

  getSession(id: string): Promise<SessionView> {
    return this.json("GET", `/api/session/${id}`);
  }

  mutate(id: string, k: number, mode: MutateMode): Promise<SessionView> {
    return this.json("POST", `/api/session/${id}/mutate`, { k, mode });
  }

  undo(id: string): Promise<SessionView> {
    return this.json("POST", `/api/session/${id}/undo`);
  }

  classify(quiver: unknown): Promise<ClassifyResult> {
    return this.json("POST", "/api/classify", quiver);
  }

  witness(qp: unknown, options: WitnessOptionsBody = {}): Promise<WitnessCertificateDoc> {
    return this.json("POST", "/api/witness", { qp, ...options });
  }
}
