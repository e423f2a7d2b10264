import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, NetworkError } from "../src/api.js";
import { TRIANGLE_QP, TRIANGLE_VIEW } from "./fixtures.js";

interface Recorded {
  url: string;
  method: string | undefined;
  body: unknown;
}

/** A fetch stub that records the request and replies from a script. */
function stub(replies: Array<{ status: number; body: unknown }>) {
  const calls: Recorded[] = [];
  let i = 0;
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const raw = init?.body;
    calls.push({
      url,
      method: init?.method,
      body: typeof raw === "string" ? JSON.parse(raw) : undefined,
    });
    const reply = replies[Math.min(i++, replies.length - 1)]!;
    const text =
      typeof reply.body === "string" ? reply.body : JSON.stringify(reply.body);
    return new Response(text, { status: reply.status });
  };
  return { calls, fetchImpl };
}

describe("ApiClient", () => {
  it("creates a session with the QP document as the body", async () => {
    const { calls, fetchImpl } = stub([{ status: 201, body: TRIANGLE_VIEW }]);
    const api = new ApiClient("http://h", fetchImpl);
    const view = await api.createSession(TRIANGLE_QP);
    expect(calls[0]).toEqual({
      url: "http://h/api/session",
      method: "POST",
      body: TRIANGLE_QP,
    });
    expect(view.id).toBe("s-123");
    expect(view.classification).toBe("Dynkin A_3");
  });

  it("mutates with the session id in the path and {k, mode} in the body", async () => {
    const { calls, fetchImpl } = stub([{ status: 200, body: TRIANGLE_VIEW }]);
    const api = new ApiClient("", fetchImpl);
    await api.mutate("s-123", 3, "qp");
    expect(calls[0]!.url).toBe("/api/session/s-123/mutate");
    expect(calls[0]!.body).toEqual({ k: 3, mode: "qp" });
  });

  it("undoes with an empty body", async () => {
    const { calls, fetchImpl } = stub([{ status: 200, body: TRIANGLE_VIEW }]);
    const api = new ApiClient("", fetchImpl);
    await api.undo("s-123");
    expect(calls[0]!.url).toBe("/api/session/s-123/undo");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.body).toBeUndefined();
  });

  it("merges witness options beside the qp document", async () => {
    const { calls, fetchImpl } = stub([{ status: 200, body: { status: "witness" } }]);
    const api = new ApiClient("", fetchImpl);
    await api.witness(TRIANGLE_QP, { k: 5, truncation: 8 });
    expect(calls[0]!.url).toBe("/api/witness");
    expect(calls[0]!.body).toEqual({ qp: TRIANGLE_QP, k: 5, truncation: 8 });
  });

  it("surfaces {error, reason} bodies verbatim as ApiError", async () => {
    const { fetchImpl } = stub([
      {
        status: 409,
        body: { error: "TwoCycleObstruction", reason: "2-cycle at (1, 2) survives reduction" },
      },
    ]);
    const api = new ApiClient("", fetchImpl);
    const err = await api.mutate("s", 1, "qp").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("TwoCycleObstruction");
    expect(err.reason).toBe("2-cycle at (1, 2) survives reduction");
  });

  it("wraps a non-JSON error body instead of crashing the caller", async () => {
    const { fetchImpl } = stub([{ status: 502, body: "<html>bad gateway</html>" }]);
    const api = new ApiClient("", fetchImpl);
    const err = await api.getSession("x").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("BadResponse");
  });

  it("maps a transport failure to NetworkError", async () => {
    const api = new ApiClient("", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await api.undo("s").catch((e) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });

  it("exposes raw response bytes through call()", async () => {
    const { fetchImpl } = stub([{ status: 200, body: '{"z": 1,  "a": 2}' }]);
    const api = new ApiClient("", fetchImpl);
    const raw = await api.call("GET", "/api/session/s");
    expect(raw.status).toBe(200);
    expect(raw.text).toBe('{"z": 1,  "a": 2}'); // untouched, spacing intact
  });
});
