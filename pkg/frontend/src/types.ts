export type SessionStatus = "active" | "jackpot" | "broke" | "ended";

export interface RoundView {
  round: number;
  computerBit: number;
  humanBit: number;
  computerWin: boolean;
  balanceAfter: number;
}

export type Phase =
  | "idle" // no commitment requested yet
  | "committing" // commit request in flight
  | "awaiting_input" // commitment shown, buttons live
  | "revealing" // round request in flight
  | "terminal" // jackpot / broke / ended
  | "error"; // a request failed; retry offered

export interface UiSessionView {
  sessionId: string;
  balance: number;
  round: number;
  status: SessionStatus;
  phase: Phase;
  commitment: string | null;
  lastOutcome: RoundView | null;
  recent: RoundView[]; // most recent last, capped at 36
  stakes: { stake: number; jackpot: number; broke: number };
  errorMessage: string | null;
}

export interface SessionStateResponse {
  id: string;
  status: SessionStatus;
  balance: number;
  round: number;
  committed: boolean;
  commitment: string | null;
  stakes: { stake: number; jackpot: number; broke: number };
  recent_rounds: RoundRecordWire[];
}

export interface RoundRecordWire {
  round: number;
  commitment: string;
  nonce: string;
  computer_bit: number;
  human_bit: number;
  computer_win: boolean;
  balance_after: number;
}

export interface CommitResponse {
  hash: string;
  round: number;
}

export interface PlayRoundResponse {
  record: RoundRecordWire;
  status: SessionStatus;
  balance: number;
}

export interface SessionReport {
  rounds: number;
  computer_wins: number;
  running_accuracy?: number;
  zero_bias?: number;
  autocorrelation?: (number | null)[];
}

export interface CreateSessionOptions {
  seed?: number;
  depth?: number;
  predictor?: { kind: string; options?: Record<string, unknown> };
  stakes?: { stake: number; jackpot: number; broke: number };
  choose?: "fixed" | "random";
}
