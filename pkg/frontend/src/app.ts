/**
 * DOM wiring.  Everything interesting lives in the pure modules: this file
 * reads events, drives the ApiClient, folds responses through state.ts and
 * pours the render.ts strings into the page.
 *
 * Requests are strictly serialized per session: a click during an
 * in-flight request is queued (never dropped, never reordered), because
 * the server is the only source of truth and optimistic updates are
 * deliberately disabled.
 */

import { ApiClient, ApiError, NetworkError } from "./api.js";
import type { HistoryOp, MutateMode, SessionView } from "./api.js";
import {
  applyNewSession,
  dequeue,
  enqueue,
  initialState,
  noteDomainError,
  noteMutateApplied,
  noteNetworkFailure,
  noteObstruction,
  noteUndoApplied,
  takeRedo,
} from "./state.js";
import type { PendingOp, ViewState } from "./state.js";
import {
  renderBadge,
  renderBanner,
  renderHistory,
  renderPotential,
  renderQuiver,
  renderWitness,
} from "./render.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const api = new ApiClient("");
let state: ViewState = initialState();
let lastFailed: PendingOp | null = null;

const EXAMPLE = {
  n: 3,
  arrows: [
    { id: "a", src: 1, tgt: 2 },
    { id: "b", src: 2, tgt: 3 },
    { id: "c", src: 3, tgt: 1 },
  ],
  potential: [{ coef: 1, cycle: ["a", "b", "c"] }],
  truncation: 6,
};

function currentMode(): MutateMode {
  const checked = document.querySelector<HTMLInputElement>('input[name="mode"]:checked');
  return checked?.value === "quiver" ? "quiver" : "qp";
}

function render(): void {
  $("banner").innerHTML = renderBanner(state.banner);
  const view = state.view;
  if (!view) return;
  const highlight = state.witness?.core ?? undefined;
  $("graph").innerHTML = renderQuiver(view.qp, state.layout, {
    twoCycles: view.twoCycles,
    highlight,
  });
  $("badge").innerHTML = renderBadge(view);
  $("potential").innerHTML = renderPotential(view.qp);
  $("history").innerHTML = renderHistory(view, state.redoStack.length);
  $("witness").innerHTML = state.witness
    ? renderWitness(state.witness)
    : state.witnessBusy
      ? "<p>running…</p>"
      : '<p class="empty">no run yet</p>';
  ($("session-id") as HTMLElement).textContent = view.id;
}

function failureBanner(op: PendingOp, err: unknown): void {
  if (err instanceof NetworkError) {
    lastFailed = op;
    state = noteNetworkFailure(state, describe(op));
  } else if (err instanceof ApiError && err.status === 409) {
    state = noteObstruction(state, err.reason);
  } else if (err instanceof ApiError) {
    state = noteDomainError(state, err.code, err.reason);
  } else {
    state = noteDomainError(state, "Unexpected", String(err));
  }
}

function describe(op: PendingOp): string {
  if (op.kind === "mutate") return `mutate at vertex ${op.k}`;
  return op.kind;
}

async function perform(op: PendingOp): Promise<void> {
  const view = state.view;
  if (!view) return;
  try {
    if (op.kind === "mutate") {
      const next = await api.mutate(view.id, op.k, op.mode);
      state = noteMutateApplied(state, next);
    } else if (op.kind === "undo") {
      const popped: HistoryOp | undefined = view.history[view.history.length - 1];
      const next = await api.undo(view.id);
      if (popped) state = noteUndoApplied(state, popped, next);
    } else {
      const { state: s2, op: redoOp } = takeRedo(state);
      state = s2;
      if (redoOp) {
        const next = await api.mutate(view.id, redoOp.k, redoOp.mode);
        state = noteMutateApplied(state, next);
      }
    }
  } catch (err) {
    failureBanner(op, err);
  }
}

async function pump(first: PendingOp): Promise<void> {
  let op: PendingOp | null = first;
  while (op) {
    await perform(op);
    render();
    const { state: s, run } = dequeue(state);
    state = s;
    op = run;
  }
  render();
}

function submit(op: PendingOp): void {
  const { state: s, run } = enqueue(state, op);
  state = s;
  if (run) void pump(run);
}

async function createSession(doc: unknown): Promise<void> {
  try {
    const view: SessionView = await api.createSession(doc);
    state = applyNewSession(state, view);
  } catch (err) {
    failureBanner({ kind: "undo" }, err); // banner only; no session state
  }
  render();
}

async function runWitness(): Promise<void> {
  const view = state.view;
  if (!view || state.witnessBusy) return;
  const k = Number(($("witness-k") as HTMLInputElement).value) || 5;
  state = { ...state, witnessBusy: true, witness: null };
  render();
  try {
    const cert = await api.witness(view.qp, { k });
    state = { ...state, witness: cert, witnessBusy: false };
  } catch (err) {
    state = { ...state, witnessBusy: false };
    if (err instanceof ApiError) {
      state = noteDomainError(state, err.code, err.reason); // 422 reason verbatim
    } else if (err instanceof NetworkError) {
      state = noteNetworkFailure(state, "witness run");
    }
  }
  render();
}

export function init(): void {
  ($("qp-input") as HTMLTextAreaElement).value = JSON.stringify(EXAMPLE, null, 2);

  $("create").addEventListener("click", () => {
    let doc: unknown;
    try {
      doc = JSON.parse(($("qp-input") as HTMLTextAreaElement).value);
    } catch (e) {
      state = noteDomainError(state, "BadInput", `not JSON: ${e}`);
      render();
      return;
    }
    void createSession(doc);
  });

  $("graph").addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    const vertex = target?.getAttribute?.("data-vertex");
    if (vertex && state.view) {
      submit({ kind: "mutate", k: Number(vertex), mode: currentMode() });
    }
  });

  $("undo").addEventListener("click", () => state.view && submit({ kind: "undo" }));
  $("redo").addEventListener("click", () => state.view && submit({ kind: "redo" }));
  $("run-witness").addEventListener("click", () => void runWitness());

  $("banner").addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    if (target?.getAttribute?.("data-action") === "retry" && lastFailed) {
      const op = lastFailed;
      lastFailed = null;
      submit(op);
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("graph")) {
  init();
}
