import type {
  PlayRoundResponse,
  RoundRecordWire,
  RoundView,
  SessionStateResponse,
  UiSessionView,
} from "./types.js";

const HISTORY_LIMIT = 36;

function toRoundView(record: RoundRecordWire): RoundView {
  return {
    round: record.round,
    computerBit: record.computer_bit,
    humanBit: record.human_bit,
    computerWin: record.computer_win,
    balanceAfter: record.balance_after,
  };
}

export function fromSessionState(state: SessionStateResponse): UiSessionView {
  const recent = state.recent_rounds.map(toRoundView).slice(-HISTORY_LIMIT);
  return {
    sessionId: state.id,
    balance: state.balance,
    round: state.round,
    status: state.status,
    phase: state.status !== "active" ? "terminal" : state.committed ? "awaiting_input" : "idle",
    commitment: state.commitment,
    lastOutcome: recent.length ? recent[recent.length - 1] : null,
    recent,
    stakes: state.stakes,
    errorMessage: null,
  };
}

export function withCommitPending(view: UiSessionView): UiSessionView {
  return { ...view, phase: "committing", commitment: null, errorMessage: null };
}

export function withCommitment(view: UiSessionView, hash: string): UiSessionView {
  return { ...view, phase: "awaiting_input", commitment: hash, errorMessage: null };
}

export function withRevealPending(view: UiSessionView): UiSessionView {
  return { ...view, phase: "revealing", errorMessage: null };
}

export function withRoundResult(
  view: UiSessionView,
  response: PlayRoundResponse,
): UiSessionView {
  const outcome = toRoundView(response.record);
  const recent = [...view.recent, outcome].slice(-HISTORY_LIMIT);
  return {
    ...view,
    balance: response.balance,
    round: outcome.round,
    status: response.status,
    phase: response.status === "active" ? "idle" : "terminal",
    commitment: null,
    lastOutcome: outcome,
    recent,
    errorMessage: null,
  };
}

export function withError(view: UiSessionView, message: string): UiSessionView {
  return { ...view, phase: "error", errorMessage: message };
}

export function inputEnabled(view: UiSessionView): boolean {
  return view.phase === "awaiting_input";
}
