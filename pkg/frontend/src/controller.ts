// View-state machine for the chat: all decisions come from the service,
// the client only tracks the transcript and which input mode is active.

import type { ChatApi, RankingEntry, SystemAction, YesNo } from "./api.js";
import { ServiceError } from "./api.js";

export type ChatMode = "free_text" | "yes_no" | "concluded";

export interface TranscriptTurn {
  speaker: "user" | "system";
  text: string;
}

export interface ChatViewState {
  sessionId: string | null;
  transcript: TranscriptTurn[];
  mode: ChatMode;
  lastRanking: RankingEntry[] | null;
  pending: boolean;
  error: string | null;
}

export type StateListener = (state: ChatViewState) => void;

export class ChatController {
  private readonly api: ChatApi;
  private readonly listener: StateListener | null;
  private sessionId: string | null = null;
  private transcript: TranscriptTurn[] = [];
  private mode: ChatMode = "free_text";
  private lastRanking: RankingEntry[] | null = null;
  private pending = false;
  private error: string | null = null;

  constructor(api: ChatApi, listener?: StateListener) {
    this.api = api;
    this.listener = listener ?? null;
  }

  state(): ChatViewState {
    return {
      sessionId: this.sessionId,
      transcript: [...this.transcript],
      mode: this.mode,
      lastRanking: this.lastRanking ? [...this.lastRanking] : null,
      pending: this.pending,
      error: this.error,
    };
  }

  private notify(): void {
    this.listener?.(this.state());
  }

  private beginRequest(): void {
    if (this.pending) {
      throw new Error("a request is already in flight");
    }
    this.pending = true;
    this.error = null;
    this.notify();
  }

  async start(): Promise<ChatViewState> {
    this.beginRequest();
    try {
      this.sessionId = await this.api.createSession();
      this.transcript = [];
      this.mode = "free_text";
      this.lastRanking = null;
    } catch (err) {
      this.error = describe(err);
    } finally {
      this.pending = false;
      this.notify();
    }
    return this.state();
  }

  private applyAction(action: SystemAction): void {
    if (action.kind === "ask") {
      this.transcript.push({ speaker: "system", text: action.question });
      this.mode = "yes_no";
    } else {
      // probabilities are rendered exactly as the server sent them
      this.lastRanking = action.ranking;
      this.transcript.push({ speaker: "system", text: describeRanking(action.ranking) });
      this.mode = "concluded";
    }
  }

  async sendDescription(text: string): Promise<ChatViewState> {
    if (this.sessionId === null || this.mode !== "free_text") {
      throw new Error("no session awaiting a description");
    }
    this.beginRequest();
    this.transcript.push({ speaker: "user", text });
    try {
      this.applyAction(await this.api.sendMessage(this.sessionId, text));
    } catch (err) {
      this.error = describe(err);
    } finally {
      this.pending = false;
      this.notify();
    }
    return this.state();
  }

  async sendAnswer(answer: YesNo): Promise<ChatViewState> {
    if (this.sessionId === null || this.mode !== "yes_no") {
      throw new Error("no clarification question is pending");
    }
    this.beginRequest();
    this.transcript.push({ speaker: "user", text: answer });
    try {
      this.applyAction(await this.api.sendAnswer(this.sessionId, answer));
    } catch (err) {
      this.error = describe(err);
    } finally {
      this.pending = false;
      this.notify();
    }
    return this.state();
  }
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.message;
  }
  return err instanceof Error ? err.message : String(err);
}

function describeRanking(ranking: RankingEntry[]): string {
  const parts = ranking.map(
    (entry) => `${entry.disease} ${(entry.probability * 100).toFixed(1)}%`,
  );
  return `Diagnosis ranking: ${parts.join(", ")}`;
}
