// Goal prompt dialog logic: exactly one command leaves the client per prompt
// (a second tap while one is in flight is swallowed), the dialog dismisses on
// the hub's acknowledgment and reopens with a notice if the hub rejects it.

import type { CommandMessage, PendingPrompt } from "./protocol.js";

export type PromptView =
  | { open: false }
  | { open: true; message: string; notice: string | null; busy: boolean };

export class PromptController {
  private prompt: PendingPrompt | null = null;
  private inFlight = false;
  private notice: string | null = null;

  show(prompt: PendingPrompt | null): void {
    this.prompt = prompt;
    this.inFlight = false;
    this.notice = null;
  }

  view(): PromptView {
    if (this.prompt === null) {
      return { open: false };
    }
    return {
      open: true,
      message: this.prompt.message,
      notice: this.notice,
      busy: this.inFlight,
    };
  }

  /** Returns the command to send, or null when a decision is already in flight. */
  decide(accept: boolean, value?: number): CommandMessage | null {
    if (this.prompt === null || this.inFlight) {
      return null;
    }
    this.inFlight = true;
    if (accept) {
      return value !== undefined
        ? { type: "command", command: "accept_goal", value }
        : { type: "command", command: "accept_goal" };
    }
    return { type: "command", command: "decline_goal" };
  }

  onAck(): void {
    this.prompt = null;
    this.inFlight = false;
    this.notice = null;
  }

  onError(message: string): void {
    this.inFlight = false;
    this.notice = message;  // dialog stays open and explains itself
  }
}
