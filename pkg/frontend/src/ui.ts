// Thin DOM layer: builds the chat widget, constructs the controller with
// a render listener, and forwards user intents. No state of its own.

import type { ChatApi } from "./api.js";
import { ChatController, type ChatViewState } from "./controller.js";

export function mountChat(root: HTMLElement, api: ChatApi): ChatController {
  root.innerHTML = `
    <div class="chat">
      <div class="banner" hidden></div>
      <div class="transcript" aria-live="polite"></div>
      <div class="ranking" hidden></div>
      <form class="composer">
        <input type="text" name="text" autocomplete="off"
               placeholder="Describe your symptoms" aria-label="message" />
        <button type="submit" class="send">Send</button>
      </form>
      <div class="answers" hidden>
        <button type="button" class="yes">Yes</button>
        <button type="button" class="no">No</button>
      </div>
    </div>`;

  const banner = root.querySelector<HTMLElement>(".banner")!;
  const transcript = root.querySelector<HTMLElement>(".transcript")!;
  const rankingBox = root.querySelector<HTMLElement>(".ranking")!;
  const form = root.querySelector<HTMLFormElement>(".composer")!;
  const input = root.querySelector<HTMLInputElement>("input[name=text]")!;
  const sendButton = root.querySelector<HTMLButtonElement>(".send")!;
  const answers = root.querySelector<HTMLElement>(".answers")!;
  const yesButton = root.querySelector<HTMLButtonElement>(".yes")!;
  const noButton = root.querySelector<HTMLButtonElement>(".no")!;

  function render(state: ChatViewState): void {
    banner.hidden = state.error === null;
    if (state.error !== null) {
      banner.textContent = `${state.error} — click to retry`;
    }

    transcript.replaceChildren(
      ...state.transcript.map((turn) => {
        const bubble = document.createElement("div");
        bubble.className = `turn ${turn.speaker}`;
        bubble.textContent = turn.text;
        return bubble;
      }),
    );

    rankingBox.hidden = state.lastRanking === null;
    if (state.lastRanking !== null) {
      rankingBox.replaceChildren(
        ...state.lastRanking.map((entry) => {
          const row = document.createElement("div");
          row.className = "bar-row";
          const label = document.createElement("span");
          label.textContent = `${entry.disease} ${(entry.probability * 100).toFixed(1)}%`;
          const bar = document.createElement("div");
          bar.className = "bar";
          bar.style.width = `${Math.round(entry.probability * 100)}%`;
          row.append(label, bar);
          return row;
        }),
      );
    }

    const busy = state.pending;
    form.hidden = state.mode !== "free_text";
    input.disabled = busy || state.mode !== "free_text";
    sendButton.disabled = busy || state.mode !== "free_text";
    answers.hidden = state.mode !== "yes_no";
    yesButton.disabled = busy || state.mode !== "yes_no";
    noButton.disabled = busy || state.mode !== "yes_no";
  }

  const controller = new ChatController(api, render);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text || controller.state().pending) {
      return;
    }
    input.value = "";
    void controller.sendDescription(text);
  });
  yesButton.addEventListener("click", () => {
    if (!controller.state().pending) {
      void controller.sendAnswer("yes");
    }
  });
  noButton.addEventListener("click", () => {
    if (!controller.state().pending) {
      void controller.sendAnswer("no");
    }
  });
  banner.addEventListener("click", () => {
    if (!controller.state().pending && controller.state().sessionId === null) {
      void controller.start();
    }
  });

  render(controller.state());
  return controller;
}
