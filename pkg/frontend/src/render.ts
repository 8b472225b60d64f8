import { inputEnabled } from "./state.js";
import type { SessionReport, UiSessionView } from "./types.js";

const MIN_REPORT_ROUNDS = 10;
const CHART_TAPS = 36;

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function money(value: number): string {
  const sign = value < 0 ? "-" : "+";
  return `${sign}$${Math.abs(value).toFixed(0)}`;
}

function statusBanner(view: UiSessionView): string {
  switch (view.status) {
    case "jackpot":
      return `<div class="banner banner-jackpot">JACKPOT! You walked away ${money(view.balance)}</div>`;
    case "broke":
      return `<div class="banner banner-broke">BROKE. The predictor cleaned you out (${money(view.balance)})</div>`;
    case "ended":
      return `<div class="banner banner-ended">Session ended at ${money(view.balance)}</div>`;
    default:
      return "";
  }
}

function commitmentPanel(view: UiSessionView): string {
  if (view.phase === "committing") {
    return `<div class="commitment pending">computer is committing&hellip;</div>`;
  }
  if (view.phase === "awaiting_input" && view.commitment) {
    return (
      `<div class="commitment ready">computer has committed` +
      `<code class="hash">${escapeHtml(view.commitment)}</code></div>`
    );
  }
  if (view.phase === "revealing") {
    return `<div class="commitment pending">revealing&hellip;</div>`;
  }
  return `<div class="commitment idle"></div>`;
}

function outcomePanel(view: UiSessionView): string {
  const last = view.lastOutcome;
  if (!last) {
    return `<div class="outcome"></div>`;
  }
  const verdict = last.computerWin ? "computer wins" : "you win";
  return (
    `<div class="outcome ${last.computerWin ? "loss" : "win"}">` +
    `round ${last.round}: you played <b>${last.humanBit}</b>, ` +
    `computer committed <b>${last.computerBit}</b> &mdash; ${verdict}</div>`
  );
}

function historyStrip(view: UiSessionView): string {
  const cells = view.recent
    .map(
      (r) =>
        `<span class="cell ${r.computerWin ? "loss" : "win"}" title="round ${r.round}">` +
        `${r.computerBit}/${r.humanBit}</span>`,
    )
    .join("");
  return `<div class="history" data-rounds="${view.recent.length}">${cells}</div>`;
}

function errorBanner(view: UiSessionView): string {
  if (view.phase !== "error") {
    return "";
  }
  return (
    `<div class="banner banner-error">network trouble: ` +
    `${escapeHtml(view.errorMessage ?? "request failed")} ` +
    `<button id="retry">retry</button></div>`
  );
}

/** Render the whole play screen; a pure function of the view. */
export function renderSession(view: UiSessionView): string {
  const disabled = inputEnabled(view) ? "" : "disabled";
  return `
<section class="session" data-phase="${view.phase}" data-status="${view.status}">
  ${statusBanner(view)}
  ${errorBanner(view)}
  <div class="scoreboard">
    <span class="balance" data-balance="${view.balance}">balance ${money(view.balance)}</span>
    <span class="round">round ${view.round}</span>
    <span class="cutoffs">jackpot ${money(view.stakes.jackpot)} / broke ${money(view.stakes.broke)}</span>
  </div>
  ${commitmentPanel(view)}
  <div class="controls">
    <button id="play-0" class="bit-button" ${disabled}>0</button>
    <button id="play-1" class="bit-button" ${disabled}>1</button>
  </div>
  ${outcomePanel(view)}
  ${historyStrip(view)}
  <div class="footer"><button id="show-report">report</button></div>
</section>`;
}

/** SVG bar chart of the first 36 autocorrelation taps; degenerate taps
 * (null) render as hollow markers. */
export function renderAutocorrelationChart(taps: (number | null)[]): string {
  const shown = taps.slice(0, CHART_TAPS);
  const barWidth = 12;
  const height = 120;
  const bars = shown
    .map((value, i) => {
      const x = i * barWidth;
      if (value === null) {
        return (
          `<rect class="tap degenerate" data-tap="${i + 1}" x="${x + 2}" ` +
          `y="${height - 4}" width="${barWidth - 4}" height="3"></rect>`
        );
      }
      const h = Math.max(1, Math.round(value * height));
      return (
        `<rect class="tap" data-tap="${i + 1}" data-value="${value}" x="${x + 2}" ` +
        `y="${height - h}" width="${barWidth - 4}" height="${h}"></rect>`
      );
    })
    .join("");
  const width = CHART_TAPS * barWidth;
  return (
    `<svg class="autocorrelation" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">${bars}</svg>`
  );
}

/** Render the post-game predictability report; placeholder below 10 rounds. */
export function renderReport(report: SessionReport): string {
  if (report.rounds < MIN_REPORT_ROUNDS) {
    return (
      `<section class="report placeholder">play at least ${MIN_REPORT_ROUNDS} rounds ` +
      `to see your predictability report</section>`
    );
  }
  const accuracy =
    report.running_accuracy === undefined
      ? "&mdash;"
      : `${(report.running_accuracy * 100).toFixed(1)}%`;
  const bias =
    report.zero_bias === undefined ? "&mdash;" : report.zero_bias.toFixed(3);
  const chart = renderAutocorrelationChart(report.autocorrelation ?? []);
  return `
<section class="report">
  <h2>predictability report</h2>
  <dl>
    <dt>rounds</dt><dd data-field="rounds">${report.rounds}</dd>
    <dt>computer accuracy</dt><dd data-field="accuracy">${accuracy}</dd>
    <dt>zero bias f0</dt><dd data-field="zero-bias">${bias}</dd>
  </dl>
  <h3>autocorrelation (first ${CHART_TAPS} taps)</h3>
  ${chart}
  <div class="footer"><button id="back-to-game">back</button></div>
</section>`;
}
