import { describe, expect, it } from "vitest";

import {
  renderAutocorrelationChart,
  renderReport,
  renderSession,
} from "../src/render.js";
import type { SessionReport, UiSessionView } from "../src/types.js";

function view(overrides: Partial<UiSessionView> = {}): UiSessionView {
  return {
    sessionId: "s1",
    balance: 0,
    round: 0,
    status: "active",
    phase: "idle",
    commitment: null,
    lastOutcome: null,
    recent: [],
    stakes: { stake: 1, jackpot: 25, broke: -25 },
    errorMessage: null,
    ...overrides,
  };
}

function parse(html: string): HTMLElement {
  const host = document.createElement("div");
  host.innerHTML = html;
  return host;
}

describe("renderSession", () => {
  it("is a pure function of the view", () => {
    const v = view({ balance: 3, round: 7, phase: "awaiting_input", commitment: "ff00" });
    expect(renderSession(v)).toBe(renderSession({ ...v }));
  });

  it("disables bit buttons unless a commitment is displayed", () => {
    for (const phase of ["idle", "committing", "revealing", "terminal", "error"] as const) {
      const dom = parse(renderSession(view({ phase })));
      expect(dom.querySelector<HTMLButtonElement>("#play-0")?.disabled).toBe(true);
      expect(dom.querySelector<HTMLButtonElement>("#play-1")?.disabled).toBe(true);
    }
    const live = parse(renderSession(view({ phase: "awaiting_input", commitment: "aa" })));
    expect(live.querySelector<HTMLButtonElement>("#play-0")?.disabled).toBe(false);
  });

  it("shows the commitment hash before the reveal and never a bit", () => {
    const html = renderSession(view({ phase: "awaiting_input", commitment: "c0ffee1234" }));
    expect(html).toContain("computer has committed");
    expect(html).toContain("c0ffee1234");
    expect(html).not.toContain("computer committed <b>");
  });

  it("renders the reveal with win/loss and balance", () => {
    const html = renderSession(
      view({
        balance: -2,
        round: 5,
        lastOutcome: {
          round: 5,
          computerBit: 1,
          humanBit: 1,
          computerWin: true,
          balanceAfter: -2,
        },
      }),
    );
    expect(html).toContain("computer wins");
    expect(html).toContain("balance -$2");
  });

  it("shows terminal banners and keeps input disabled", () => {
    const brokeDom = parse(
      renderSession(view({ status: "broke", phase: "terminal", balance: -25 })),
    );
    expect(brokeDom.textContent).toContain("BROKE");
    expect(brokeDom.querySelector<HTMLButtonElement>("#play-1")?.disabled).toBe(true);
    const jackpotHtml = renderSession(
      view({ status: "jackpot", phase: "terminal", balance: 25 }),
    );
    expect(jackpotHtml).toContain("JACKPOT");
  });

  it("offers a retry button on network trouble", () => {
    const dom = parse(renderSession(view({ phase: "error", errorMessage: "offline" })));
    expect(dom.querySelector("#retry")).not.toBeNull();
    expect(dom.textContent).toContain("offline");
  });

  it("golden screen state for a mid-game view", () => {
    const html = renderSession(
      view({
        balance: 2,
        round: 3,
        phase: "awaiting_input",
        commitment: "abcd",
        recent: [
          { round: 1, computerBit: 0, humanBit: 1, computerWin: false, balanceAfter: 1 },
          { round: 2, computerBit: 1, humanBit: 0, computerWin: false, balanceAfter: 2 },
        ],
        lastOutcome: {
          round: 2,
          computerBit: 1,
          humanBit: 0,
          computerWin: false,
          balanceAfter: 2,
        },
      }),
    );
    expect(html).toMatchSnapshot();
  });
});

describe("renderAutocorrelationChart", () => {
  it("draws one bar per tap with the value attached", () => {
    const dom = parse(renderAutocorrelationChart([1.0, 0.25, null, 0.5]));
    const bars = dom.querySelectorAll("rect.tap");
    expect(bars).toHaveLength(4);
    expect(bars[0].getAttribute("data-value")).toBe("1");
    expect(bars[0].getAttribute("data-tap")).toBe("1");
    expect(bars[2].classList.contains("degenerate")).toBe(true);
  });

  it("caps the chart at 36 taps", () => {
    const taps = Array.from({ length: 60 }, () => 0.1);
    const dom = parse(renderAutocorrelationChart(taps));
    expect(dom.querySelectorAll("rect.tap")).toHaveLength(36);
  });
});

describe("renderReport", () => {
  it("shows a placeholder below ten rounds", () => {
    const html = renderReport({ rounds: 4, computer_wins: 2 });
    expect(html).toContain("placeholder");
    expect(html).not.toContain("autocorrelation");
  });

  it("renders the statistics verbatim from the payload", () => {
    const report: SessionReport = {
      rounds: 40,
      computer_wins: 26,
      running_accuracy: 0.65,
      zero_bias: 0.525,
      autocorrelation: [1.0, 0.2],
    };
    const dom = parse(renderReport(report));
    expect(dom.querySelector('[data-field="accuracy"]')?.textContent).toBe("65.0%");
    expect(dom.querySelector('[data-field="zero-bias"]')?.textContent).toBe("0.525");
    expect(dom.querySelector('rect.tap[data-tap="1"]')?.getAttribute("data-value")).toBe("1");
  });
});
