/**
 * Chat state and rendering, kept free of DOM access so the whole submit ->
 * render flow is testable in plain node. main.ts owns the actual DOM.
 *
 * The UI never computes or reformats a score: every number is rendered with
 * String(), i.e. exactly the value the API serialized.
 */

import { ApiQueryResponse, CandidateRow, FetchLike, postQuery } from "./api.js";

export interface ChatEntry {
  role: "user" | "system";
  text: string;
  response?: ApiQueryResponse;
  error?: boolean;
}

export interface ChatState {
  entries: ChatEntry[];
  debug: boolean;
  pending: boolean;
}

export function createState(): ChatState {
  return { entries: [], debug: false, pending: false };
}

export function toggleDebug(state: ChatState): ChatState {
  state.debug = !state.debug;
  return state;
}

/**
 * POST the query and append the user/system entry pair. Chat history is
 * append-only; on failure the system entry is an error bubble and the
 * caller keeps the input text for retry.
 */
export async function submitQuery(
  state: ChatState,
  text: string,
  fetchFn?: FetchLike,
): Promise<ChatEntry | null> {
  const trimmed = text.trim();
  if (!trimmed || state.pending) {
    return null;
  }
  state.entries.push({ role: "user", text: trimmed });
  state.pending = true;
  let entry: ChatEntry;
  try {
    const response = await postQuery(trimmed, state.debug, fetchFn);
    entry = { role: "system", text: response.reply_text, response };
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    entry = { role: "system", text: `Request failed: ${message}`, error: true };
  } finally {
    state.pending = false;
  }
  state.entries.push(entry);
  return entry;
}

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Corpus bodies carry HTML; show them as plain text rather than injecting. */
export function stripTags(html: string): string {
  const text = html
    .replace(/<[^>]*>/g, " ")
    .replace(/&amp;/g, "&")
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"')
    .replace(/&#39;/g, "'");
  return text.replace(/\s+/g, " ").trim();
}

export function renderCandidateTable(candidates: CandidateRow[]): string {
  if (candidates.length === 0) {
    return '<p class="placeholder">no candidates</p>';
  }
  const rows = candidates
    .map(
      (c) =>
        `<tr><td>${String(c.id)}</td><td>${escapeHtml(c.title)}</td>` +
        `<td>${String(c.tfidf)}</td><td>${String(c.cosine)}</td>` +
        `<td>${String(c.fused)}</td></tr>`,
    )
    .join("");
  return (
    '<table class="candidates"><thead><tr>' +
    "<th>id</th><th>title</th><th>tfidf</th><th>cosine</th><th>fused</th>" +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

function renderAnswerCard(response: ApiQueryResponse, debug: boolean): string {
  const question = response.question;
  const parts = ['<div class="card answer-card">'];
  if (question !== null) {
    parts.push(
      '<div class="matched">matched question ' +
        `<span class="qid">#${String(question.id)}</span> ` +
        `<span class="qtitle">${escapeHtml(question.title)}</span></div>`,
    );
  }
  if (response.category !== null) {
    parts.push(`<span class="badge ${response.category}">${response.category}</span>`);
  }
  if (response.answer !== null) {
    parts.push(`<div class="answer-text">${escapeHtml(stripTags(response.answer))}</div>`);
  }
  if (debug && response.candidates !== undefined) {
    parts.push(renderCandidateTable(response.candidates));
  }
  parts.push("</div>");
  return parts.join("");
}

export function renderEntry(entry: ChatEntry, state: ChatState): string {
  if (entry.role === "user") {
    return `<div class="bubble user">${escapeHtml(entry.text)}</div>`;
  }
  if (entry.error || entry.response === undefined) {
    return `<div class="bubble system error">${escapeHtml(entry.text)}</div>`;
  }
  const response = entry.response;
  if (response.kind === "answer") {
    return renderAnswerCard(response, state.debug);
  }
  if (response.kind === "no_result") {
    const badge =
      response.category !== null
        ? `<span class="badge ${response.category}">${response.category}</span>`
        : "";
    const debugSection =
      state.debug && response.candidates !== undefined
        ? renderCandidateTable(response.candidates)
        : "";
    return `<div class="bubble system">${escapeHtml(entry.text)}${badge}${debugSection}</div>`;
  }
  return `<div class="bubble system">${escapeHtml(entry.text)}</div>`;
}

export function renderChat(state: ChatState): string {
  return state.entries.map((entry) => renderEntry(entry, state)).join("\n");
}
