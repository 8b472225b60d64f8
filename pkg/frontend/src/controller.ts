import { ApiClient } from "./api.js";
import { renderReport, renderSession } from "./render.js";
import {
  fromSessionState,
  inputEnabled,
  withCommitPending,
  withCommitment,
  withError,
  withRevealPending,
  withRoundResult,
} from "./state.js";
import type { CreateSessionOptions, UiSessionView } from "./types.js";

type Screen = "game" | "report";

/** Drives one session: strictly sequenced commit -> human input -> reveal.
 *
 * The controller never asks the server for anything that could leak the
 * committed bit; the view only learns computer bits from round (reveal)
 * responses.
 */
export class GameController {
  view: UiSessionView | null = null;
  private screen: Screen = "game";

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement | null;
      if (!target) return;
      if (target.id === "play-0") void this.play(0);
      else if (target.id === "play-1") void this.play(1);
      else if (target.id === "retry") void this.retry();
      else if (target.id === "show-report") void this.showReport();
      else if (target.id === "back-to-game") this.showGame();
    });
  }

  async start(options: CreateSessionOptions): Promise<void> {
    const state = await this.api.createSession(options);
    this.view = fromSessionState(state);
    this.render();
    if (this.view.phase === "idle") {
      await this.commit();
    }
  }

  /** Ask the server to commit to its bit for the next round. */
  async commit(): Promise<void> {
    if (!this.view || this.view.status !== "active") return;
    this.update(withCommitPending(this.view));
    try {
      const commit = await this.api.commit(this.view.sessionId);
      this.update(withCommitment(this.view, commit.hash));
    } catch (error) {
      this.update(withError(this.view, String(error)));
    }
  }

  /** Submit the human bit; only valid while a commitment is displayed. */
  async play(bit: 0 | 1): Promise<void> {
    if (!this.view || !inputEnabled(this.view)) return;
    this.update(withRevealPending(this.view));
    try {
      const response = await this.api.playRound(this.view.sessionId, bit);
      this.update(withRoundResult(this.view, response));
      if (this.view.status === "active") {
        await this.commit();
      }
    } catch (error) {
      this.update(withError(this.view, String(error)));
    }
  }

  /** Reconcile with the server after a failed request: the authoritative
   * state says whether the round went through or the commitment is still
   * waiting for input. */
  async retry(): Promise<void> {
    if (!this.view) return;
    try {
      const state = await this.api.state(this.view.sessionId);
      this.view = fromSessionState(state);
      this.render();
      if (this.view.phase === "idle") {
        await this.commit();
      }
    } catch (error) {
      this.update(withError(this.view, String(error)));
    }
  }

  async showReport(): Promise<void> {
    if (!this.view) return;
    try {
      const report = await this.api.report(this.view.sessionId);
      this.screen = "report";
      this.root.innerHTML = renderReport(report);
    } catch (error) {
      this.update(withError(this.view, String(error)));
    }
  }

  showGame(): void {
    this.screen = "game";
    this.render();
  }

  private update(view: UiSessionView): void {
    this.view = view;
    if (this.screen === "game") {
      this.render();
    }
  }

  private render(): void {
    if (this.view) {
      this.root.innerHTML = renderSession(this.view);
    }
  }
}
