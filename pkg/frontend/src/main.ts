import { createChatApi } from "./api.js";
import { mountChat } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
const controller = mountChat(root, createChatApi(baseUrl));
void controller.start();
