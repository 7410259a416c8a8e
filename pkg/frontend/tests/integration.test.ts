// End-to-end: spawn the real diagnosis service with the four-symptom
// fixture model and drive a scripted chat session through the controller.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { createChatApi } from "../src/api.js";
import { ChatController } from "../src/controller.js";

const FIXTURE_KB = {
  symptoms: ["cough", "fever", "headache", "rash"].map((s) => ({
    id: s,
    canonical: s,
    synonyms: [],
  })),
  diseases: ["flu", "measles"].map((d) => ({ id: d, canonical: d, synonyms: [] })),
};

const FIXTURE_TRAIN = [
  { symptoms: ["fever", "cough"], diagnosis: "flu" },
  { symptoms: ["cough"], diagnosis: "flu" },
  { symptoms: ["fever", "rash"], diagnosis: "measles" },
];

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      server.close(() => resolve(address.port));
    });
  });
}

describe("scripted session against the live service", () => {
  let workdir: string;
  let server: ChildProcess | null = null;
  let baseUrl: string;

  beforeAll(async () => {
    workdir = mkdtempSync(join(tmpdir(), "medclarify-webchat-"));
    const kbPath = join(workdir, "kb.json");
    const trainPath = join(workdir, "train.jsonl");
    const modelPath = join(workdir, "model.json");
    writeFileSync(kbPath, JSON.stringify(FIXTURE_KB));
    writeFileSync(
      trainPath,
      FIXTURE_TRAIN.map((row) => JSON.stringify(row)).join("\n") + "\n",
    );
    const trained = spawnSync(
      "python3",
      ["-m", "medclarify", "train", "--train", trainPath, "--kb", kbPath,
       "--out-model", modelPath],
      { encoding: "utf-8" },
    );
    expect(trained.status, trained.stderr).toBe(0);

    const port = await freePort();
    baseUrl = `http://127.0.0.1:${port}`;
    server = spawn(
      "python3",
      ["-m", "medclarify", "serve", "--bind", `127.0.0.1:${port}`,
       "--model", modelPath, "--kb", kbPath],
      { stdio: "ignore" },
    );
    const deadline = Date.now() + 30_000;
    for (;;) {
      try {
        const response = await fetch(`${baseUrl}/healthz`);
        if (response.ok) {
          break;
        }
      } catch {
        // not up yet
      }
      if (Date.now() > deadline) {
        throw new Error("service did not become healthy in time");
      }
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  });

  afterAll(() => {
    server?.kill("SIGINT");
    rmSync(workdir, { recursive: true, force: true });
  });

  it("asks cough then rash and ends with a normalized ranking", async () => {
    const controller = new ChatController(createChatApi(baseUrl));
    let state = await controller.start();
    expect(state.error).toBeNull();
    expect(state.mode).toBe("free_text");

    state = await controller.sendDescription("I have a fever");
    expect(state.mode).toBe("yes_no");
    state = await controller.sendAnswer("no");
    expect(state.mode).toBe("yes_no");
    state = await controller.sendAnswer("yes");
    expect(state.mode).toBe("concluded");

    const systemTurns = state.transcript
      .filter((turn) => turn.speaker === "system")
      .map((turn) => turn.text);
    expect(systemTurns[0]).toBe("Do you also have cough?");
    expect(systemTurns[1]).toBe("Do you also have rash?");

    const userTurns = state.transcript
      .filter((turn) => turn.speaker === "user")
      .map((turn) => turn.text);
    expect(userTurns).toEqual(["I have a fever", "no", "yes"]);

    expect(state.lastRanking).not.toBeNull();
    const total = state.lastRanking!.reduce((sum, row) => sum + row.probability, 0);
    expect(Math.abs(total - 1)).toBeLessThan(1e-9);
    expect(state.lastRanking![0].disease).toBe("measles");
  });

  it("reports 409 through the error banner on an out-of-turn answer", async () => {
    const api = createChatApi(baseUrl);
    const controller = new ChatController(api);
    await controller.start();
    await controller.sendDescription("I have a fever");
    await controller.sendAnswer("yes"); // concludes: flu is confident here
    const sessionId = controller.state().sessionId!;
    await expect(api.sendAnswer(sessionId, "yes")).rejects.toMatchObject({
      status: 409,
    });
  });
});
