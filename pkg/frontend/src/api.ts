// Typed client for the diagnosis service's JSON API.

export interface AskAction {
  kind: "ask";
  symptom: string;
  question: string;
}

export interface RankingEntry {
  disease: string;
  probability: number;
}

export interface DiagnoseAction {
  kind: "diagnose";
  ranking: RankingEntry[];
}

export type SystemAction = AskAction | DiagnoseAction;

export type YesNo = "yes" | "no";

export class ServiceError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, error: string, detail: string) {
    super(`${error}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

export interface ChatApi {
  createSession(): Promise<string>;
  sendMessage(sessionId: string, text: string): Promise<SystemAction>;
  sendAnswer(sessionId: string, answer: YesNo): Promise<SystemAction>;
}

async function requestJson(
  fetchImpl: typeof fetch,
  url: string,
  body?: unknown,
): Promise<unknown> {
  let response: Response;
  try {
    response = await fetchImpl(url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch (cause) {
    throw new ServiceError(0, "unreachable", `cannot reach ${url}`);
  }
  const payload = await response.json().catch(() => ({}));
  if (!response.ok) {
    const err = payload as { error?: string; detail?: string };
    throw new ServiceError(
      response.status,
      err.error ?? "http_error",
      err.detail ?? response.statusText,
    );
  }
  return payload;
}

export function createChatApi(
  baseUrl: string,
  fetchImpl: typeof fetch = fetch,
): ChatApi {
  const root = baseUrl.replace(/\/+$/, "");
  return {
    async createSession() {
      const payload = (await requestJson(fetchImpl, `${root}/api/sessions`)) as {
        session_id: string;
      };
      return payload.session_id;
    },
    async sendMessage(sessionId, text) {
      return (await requestJson(
        fetchImpl,
        `${root}/api/sessions/${encodeURIComponent(sessionId)}/message`,
        { text },
      )) as SystemAction;
    },
    async sendAnswer(sessionId, answer) {
      return (await requestJson(
        fetchImpl,
        `${root}/api/sessions/${encodeURIComponent(sessionId)}/answer`,
        { answer },
      )) as SystemAction;
    },
  };
}
