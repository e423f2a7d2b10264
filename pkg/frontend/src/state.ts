/**
 * View state and its pure transition functions.
 *
 * The server is the only source of truth: a rendered view is a pure
 * function of the last session response, and no mutation math ever runs
 * in the client.  What the client does keep is interaction bookkeeping —
 * the click queue (clicks during an in-flight request are queued, not
 * dropped, preserving per-session order), the redo stack (an undone
 * operation can be re-submitted verbatim), and the banner surface.
 */

import type { HistoryOp, MutateMode, SessionView, WitnessCertificateDoc } from "./api.js";
import type { LayoutMap } from "./layout.js";
import { layoutFor } from "./layout.js";

export type PendingOp =
  | { kind: "mutate"; k: number; mode: MutateMode }
  | { kind: "undo" }
  | { kind: "redo" };

export type Banner =
  | { kind: "obstruction"; reason: string }
  | { kind: "error"; code: string; reason: string }
  | { kind: "retry"; description: string }
  | null;

export interface ViewState {
  view: SessionView | null;
  layout: LayoutMap;
  redoStack: HistoryOp[];
  busy: boolean;
  queue: PendingOp[];
  banner: Banner;
  witness: WitnessCertificateDoc | null;
  witnessBusy: boolean;
  /** Number of applied operations — the position in the session history. */
  historyCursor: number;
}

export function initialState(): ViewState {
  return {
    view: null,
    layout: new Map(),
    redoStack: [],
    busy: false,
    queue: [],
    banner: null,
    witness: null,
    witnessBusy: false,
    historyCursor: 0,
  };
}

/** Fold a fresh server response into the state (layout stays pinned). */
export function applyView(state: ViewState, view: SessionView): ViewState {
  return {
    ...state,
    view,
    layout: layoutFor(view.qp, state.layout),
    banner: null,
    historyCursor: view.history.length,
  };
}

/** A brand-new session invalidates layout pins, redo and witness panels. */
export function applyNewSession(state: ViewState, view: SessionView): ViewState {
  return applyView(
    { ...state, layout: new Map(), redoStack: [], witness: null, queue: [] },
    view,
  );
}

/**
 * Record the user's intent.  When a request is in flight the operation is
 * queued; otherwise it becomes the one to run now.  Returns the new state
 * plus the operation to execute immediately (if any).
 */
export function enqueue(state: ViewState, op: PendingOp): { state: ViewState; run: PendingOp | null } {
  if (state.busy) {
    return { state: { ...state, queue: [...state.queue, op] }, run: null };
  }
  return { state: { ...state, busy: true }, run: op };
}

/** After a response: pull the next queued operation, if any. */
export function dequeue(state: ViewState): { state: ViewState; run: PendingOp | null } {
  const [next, ...rest] = state.queue;
  if (next === undefined) {
    return { state: { ...state, busy: false }, run: null };
  }
  return { state: { ...state, queue: rest, busy: true }, run: next };
}

/** A fresh mutation forks history: the redo stack dies. */
export function noteMutateApplied(state: ViewState, view: SessionView): ViewState {
  return applyView({ ...state, redoStack: [] }, view);
}

/** Undo succeeded: remember the popped operation so redo can re-send it. */
export function noteUndoApplied(state: ViewState, popped: HistoryOp, view: SessionView): ViewState {
  return applyView({ ...state, redoStack: [...state.redoStack, popped] }, view);
}

/** Redo = re-submit the most recently undone operation. */
export function takeRedo(state: ViewState): { state: ViewState; op: HistoryOp | null } {
  const op = state.redoStack[state.redoStack.length - 1] ?? null;
  if (op === null) return { state, op: null };
  return { state: { ...state, redoStack: state.redoStack.slice(0, -1) }, op };
}

/**
 * A 409 on mutate: the obstruction is displayed and the view is left
 * exactly as it was (the server refused, so nothing changed there either).
 */
export function noteObstruction(state: ViewState, reason: string): ViewState {
  return { ...state, banner: { kind: "obstruction", reason } };
}

export function noteDomainError(state: ViewState, code: string, reason: string): ViewState {
  return { ...state, banner: { kind: "error", code, reason } };
}

export function noteNetworkFailure(state: ViewState, description: string): ViewState {
  return { ...state, banner: { kind: "retry", description } };
}
