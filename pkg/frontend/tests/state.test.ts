import { describe, expect, it } from "vitest";

import {
  fromSessionState,
  inputEnabled,
  withCommitment,
  withCommitPending,
  withError,
  withRoundResult,
} from "../src/state.js";
import type { PlayRoundResponse, SessionStateResponse } from "../src/types.js";

function baseState(overrides: Partial<SessionStateResponse> = {}): SessionStateResponse {
  return {
    id: "abc",
    status: "active",
    balance: 0,
    round: 0,
    committed: false,
    commitment: null,
    stakes: { stake: 1, jackpot: 25, broke: -25 },
    recent_rounds: [],
    ...overrides,
  };
}

function roundResponse(
  round: number,
  computerBit: number,
  humanBit: number,
  balance: number,
  status: "active" | "jackpot" | "broke" = "active",
): PlayRoundResponse {
  return {
    record: {
      round,
      commitment: `hash-${round}`,
      nonce: `nonce-${round}`,
      computer_bit: computerBit,
      human_bit: humanBit,
      computer_win: computerBit === humanBit,
      balance_after: balance,
    },
    status,
    balance,
  };
}

describe("fromSessionState", () => {
  it("starts idle with no history", () => {
    const view = fromSessionState(baseState());
    expect(view.phase).toBe("idle");
    expect(view.recent).toEqual([]);
    expect(view.lastOutcome).toBeNull();
    expect(inputEnabled(view)).toBe(false);
  });

  it("resumes awaiting input when a commitment is pending server-side", () => {
    const view = fromSessionState(
      baseState({ committed: true, commitment: "deadbeef" }),
    );
    expect(view.phase).toBe("awaiting_input");
    expect(view.commitment).toBe("deadbeef");
    expect(inputEnabled(view)).toBe(true);
  });

  it("marks finished sessions terminal", () => {
    const view = fromSessionState(baseState({ status: "broke", balance: -25 }));
    expect(view.phase).toBe("terminal");
    expect(inputEnabled(view)).toBe(false);
  });
});

describe("round flow reducers", () => {
  it("walks idle -> committing -> awaiting_input -> revealing -> idle", () => {
    let view = fromSessionState(baseState());
    view = withCommitPending(view);
    expect(view.phase).toBe("committing");
    expect(inputEnabled(view)).toBe(false);
    view = withCommitment(view, "cafe01");
    expect(view.phase).toBe("awaiting_input");
    expect(view.commitment).toBe("cafe01");
    view = withRoundResult(view, roundResponse(1, 1, 0, 1));
    expect(view.phase).toBe("idle");
    expect(view.balance).toBe(1);
    expect(view.lastOutcome?.computerWin).toBe(false);
    expect(view.commitment).toBeNull();
  });

  it("keeps only the last 36 rounds of history", () => {
    let view = fromSessionState(baseState());
    for (let round = 1; round <= 50; round += 1) {
      view = withCommitment(view, `h${round}`);
      view = withRoundResult(view, roundResponse(round, round % 2, 1, -round));
    }
    expect(view.recent).toHaveLength(36);
    expect(view.recent[0].round).toBe(15);
    expect(view.recent[35].round).toBe(50);
  });

  it("terminal statuses freeze the session", () => {
    let view = fromSessionState(baseState());
    view = withCommitment(view, "h");
    view = withRoundResult(view, roundResponse(1, 1, 1, -25, "broke"));
    expect(view.phase).toBe("terminal");
    expect(view.status).toBe("broke");
    expect(inputEnabled(view)).toBe(false);
  });

  it("errors carry a message and disable input", () => {
    let view = fromSessionState(baseState());
    view = withError(view, "boom");
    expect(view.phase).toBe("error");
    expect(view.errorMessage).toBe("boom");
    expect(inputEnabled(view)).toBe(false);
  });
});
