/** DOM wiring: one input, one send button, a debug toggle, the chat log. */

import { getHealth } from "./api.js";
import { createState, renderChat, submitQuery, toggleDebug } from "./app.js";

const state = createState();

const chatEl = document.getElementById("chat") as HTMLDivElement;
const inputEl = document.getElementById("query-input") as HTMLInputElement;
const sendEl = document.getElementById("send") as HTMLButtonElement;
const debugEl = document.getElementById("debug-toggle") as HTMLInputElement;
const statusEl = document.getElementById("status") as HTMLSpanElement;

function redraw(): void {
  chatEl.innerHTML = renderChat(state);
  chatEl.scrollTop = chatEl.scrollHeight;
  inputEl.disabled = state.pending;
  sendEl.disabled = state.pending;
}

async function send(): Promise<void> {
  const text = inputEl.value;
  if (!text.trim() || state.pending) {
    return;
  }
  inputEl.value = "";
  const pendingRedraw = submitQuery(state, text).then((entry) => {
    if (entry?.error) {
      inputEl.value = text; // keep the query for retry
    }
    redraw();
  });
  redraw();
  await pendingRedraw;
  inputEl.focus();
}

sendEl.addEventListener("click", () => void send());
inputEl.addEventListener("keydown", (event) => {
  if (event.key === "Enter") {
    void send();
  }
});
debugEl.addEventListener("change", () => {
  toggleDebug(state);
  redraw();
});

getHealth()
  .then((health) => {
    statusEl.textContent =
      health.status === "ok" ? `${health.n_questions} questions indexed` : "index loading...";
  })
  .catch(() => {
    statusEl.textContent = "server unreachable";
  });

redraw();
