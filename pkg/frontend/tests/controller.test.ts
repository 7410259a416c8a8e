import { describe, expect, it } from "vitest";

import { createChatApi, ServiceError, type ChatApi, type SystemAction } from "../src/api.js";
import { ChatController, type ChatViewState } from "../src/controller.js";

function stubApi(overrides: Partial<ChatApi> = {}): ChatApi {
  return {
    createSession: async () => "sess-1",
    sendMessage: async () => ({
      kind: "ask",
      symptom: "cough",
      question: "Do you also have cough?",
    }),
    sendAnswer: async () => ({
      kind: "diagnose",
      ranking: [
        { disease: "influenza", probability: 0.8649967040210942 },
        { disease: "measles", probability: 0.13500329597890576 },
      ],
    }),
    ...overrides,
  };
}

describe("ChatController", () => {
  it("starts with an empty transcript in free_text mode", async () => {
    const controller = new ChatController(stubApi());
    const state = await controller.start();
    expect(state.sessionId).toBe("sess-1");
    expect(state.transcript).toEqual([]);
    expect(state.mode).toBe("free_text");
    expect(state.error).toBeNull();
  });

  it("shows an error banner when the service is down and recovers on retry", async () => {
    let healthy = false;
    const controller = new ChatController(
      stubApi({
        createSession: async () => {
          if (!healthy) {
            throw new ServiceError(503, "model_not_loaded", "no model");
          }
          return "sess-2";
        },
      }),
    );
    let state = await controller.start();
    expect(state.error).toContain("model_not_loaded");
    expect(state.sessionId).toBeNull();

    healthy = true;
    state = await controller.start();
    expect(state.error).toBeNull();
    expect(state.sessionId).toBe("sess-2");
  });

  it("appends user and system turns in order and switches to yes_no on ask", async () => {
    const controller = new ChatController(stubApi());
    await controller.start();
    const state = await controller.sendDescription("I have a fever");
    expect(state.transcript).toEqual([
      { speaker: "user", text: "I have a fever" },
      { speaker: "system", text: "Do you also have cough?" },
    ]);
    expect(state.mode).toBe("yes_no");
  });

  it("concludes with the server's ranking, unmodified", async () => {
    const controller = new ChatController(stubApi());
    await controller.start();
    await controller.sendDescription("I have a fever");
    const state = await controller.sendAnswer("yes");
    expect(state.mode).toBe("concluded");
    expect(state.lastRanking).toEqual([
      { disease: "influenza", probability: 0.8649967040210942 },
      { disease: "measles", probability: 0.13500329597890576 },
    ]);
  });

  it("permits only one in-flight request", async () => {
    let release: (action: SystemAction) => void = () => {};
    const blocked = new Promise<SystemAction>((resolve) => {
      release = resolve;
    });
    const controller = new ChatController(
      stubApi({ sendMessage: () => blocked }),
    );
    await controller.start();
    const first = controller.sendDescription("I have a fever");
    expect(controller.state().pending).toBe(true);
    await expect(controller.sendDescription("again")).rejects.toThrow(/in flight/);
    release({ kind: "ask", symptom: "cough", question: "Do you also have cough?" });
    const state = await first;
    expect(state.pending).toBe(false);
    expect(state.transcript).toHaveLength(2);
  });

  it("keeps yes_no mode and reports the error when an answer is rejected", async () => {
    const controller = new ChatController(
      stubApi({
        sendAnswer: async () => {
          throw new ServiceError(422, "unrecognized_answer", "please answer yes or no");
        },
      }),
    );
    await controller.start();
    await controller.sendDescription("I have a fever");
    const state = await controller.sendAnswer("yes");
    expect(state.mode).toBe("yes_no");
    expect(state.error).toContain("unrecognized_answer");
  });

  it("rejects turns that do not match the current mode", async () => {
    const controller = new ChatController(stubApi());
    await controller.start();
    await expect(controller.sendAnswer("yes")).rejects.toThrow(/pending/);
    await controller.sendDescription("I have a fever");
    await expect(controller.sendDescription("again")).rejects.toThrow(/description/);
  });

  it("notifies the listener on every state change", async () => {
    const seen: ChatViewState[] = [];
    const controller = new ChatController(stubApi(), (state) => seen.push(state));
    await controller.start();
    await controller.sendDescription("I have a fever");
    expect(seen.length).toBeGreaterThanOrEqual(4);
    expect(seen.some((s) => s.pending)).toBe(true);
    expect(seen[seen.length - 1].mode).toBe("yes_no");
  });
});

describe("createChatApi", () => {
  it("posts JSON and unwraps the session id", async () => {
    const calls: Array<{ url: string; body: unknown }> = [];
    const fetchImpl = (async (url: any, init: any) => {
      calls.push({ url: String(url), body: init?.body ? JSON.parse(init.body) : undefined });
      return new Response(JSON.stringify({ session_id: "abc" }), { status: 201 });
    }) as typeof fetch;
    const api = createChatApi("http://service:8000/", fetchImpl);
    expect(await api.createSession()).toBe("abc");
    expect(calls[0].url).toBe("http://service:8000/api/sessions");
  });

  it("raises ServiceError with the server's error payload", async () => {
    const fetchImpl = (async () =>
      new Response(JSON.stringify({ error: "unknown_session", detail: "no session" }), {
        status: 404,
      })) as typeof fetch;
    const api = createChatApi("http://service:8000", fetchImpl);
    await expect(api.sendMessage("nope", "hi")).rejects.toMatchObject({
      status: 404,
      detail: "no session",
    });
  });

  it("maps network failures to a reachability error", async () => {
    const fetchImpl = (async () => {
      throw new TypeError("fetch failed");
    }) as typeof fetch;
    const api = createChatApi("http://service:8000", fetchImpl);
    await expect(api.createSession()).rejects.toMatchObject({ status: 0 });
  });
});
