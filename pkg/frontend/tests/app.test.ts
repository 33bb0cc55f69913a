/**
 * Runs the submit -> render flow against a mock server that replays raw
 * responses recorded from the real API (scripts/record_ui_fixtures.py).
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { FetchLike, getHealth } from "../src/api.js";
import {
  createState,
  renderChat,
  renderCandidateTable,
  submitQuery,
  toggleDebug,
} from "../src/app.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

interface QueryFixture {
  request: { text: string; debug: boolean };
  status: number;
  body: string;
}

function loadFixture(name: string): QueryFixture {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8"));
}

const QUERY_FIXTURES = [
  "salutation",
  "answer_plain",
  "answer_debug",
  "answer_debug_trouble",
  "no_result",
  "empty_text",
].map(loadFixture);

/** Replay recorded responses, matching on the posted text + debug flag. */
function mockServer(): FetchLike {
  return async (url, init) => {
    if (url === "/api/health") {
      const health = JSON.parse(readFileSync(join(FIXTURES, "health.json"), "utf-8"));
      return { ok: health.status < 400, status: health.status, text: async () => health.body };
    }
    if (url !== "/api/query" || init?.body === undefined) {
      return { ok: false, status: 404, text: async () => "not found" };
    }
    const request = JSON.parse(init.body) as { text: string; debug: boolean };
    const match = QUERY_FIXTURES.find(
      (f) => f.request.text === request.text && f.request.debug === request.debug,
    );
    if (!match) {
      throw new Error(`no recorded fixture for ${init.body}`);
    }
    return { ok: match.status < 400, status: match.status, text: async () => match.body };
  };
}

describe("submit/render round trip", () => {
  it("renders the answer card with matched question and category badge", async () => {
    const state = createState();
    await submitQuery(state, "How do I install Ubuntu on Windows?", mockServer());
    expect(state.entries).toHaveLength(2);
    const html = renderChat(state);
    expect(html).toContain('class="bubble user"');
    expect(html).toContain('class="card answer-card"');
    expect(html).toContain("matched question");
    expect(html).toContain("How to install Ubuntu alongside Windows?");
    expect(html).toContain('class="badge factual"');
    expect(html).toContain("Shrink the Windows partition");
    expect(html).not.toContain("<p>"); // answer body shown as text, not injected HTML
  });

  it("renders a salutation bubble without an answer card", async () => {
    const state = createState();
    await submitQuery(state, "hi", mockServer());
    const html = renderChat(state);
    expect(html).toContain("Hello! Ask me anything about Ubuntu.");
    expect(html).not.toContain("answer-card");
    expect(html).not.toContain("matched question");
  });

  it("renders no_result replies as a plain system bubble", async () => {
    const state = createState();
    state.debug = true;
    await submitQuery(state, "zebra quagga okapi", mockServer());
    const entry = state.entries[1];
    expect(entry.response?.kind).toBe("no_result");
    const html = renderChat(state);
    expect(html).not.toContain("answer-card");
    expect(html).toContain("no candidates"); // debug + empty candidates placeholder
  });

  it("keeps history append-only across submissions", async () => {
    const state = createState();
    await submitQuery(state, "hi", mockServer());
    const snapshot = [...state.entries];
    await submitQuery(state, "How do I install Ubuntu on Windows?", mockServer());
    expect(state.entries).toHaveLength(4);
    expect(state.entries.slice(0, 2)).toEqual(snapshot);
  });
});

describe("debug toggle", () => {
  it("shows the candidate table when on and hides it when off", async () => {
    const state = createState();
    toggleDebug(state);
    expect(state.debug).toBe(true);
    await submitQuery(state, "How do I install Ubuntu on Windows?", mockServer());

    const withDebug = renderChat(state);
    expect(withDebug).toContain('class="candidates"');
    const rows = withDebug.match(/<tr><td>/g) ?? [];
    expect(rows.length).toBeGreaterThan(0);
    expect(rows.length).toBeLessThanOrEqual(20);
    expect(withDebug).toContain("<th>tfidf</th><th>cosine</th><th>fused</th>");

    toggleDebug(state);
    expect(renderChat(state)).not.toContain('class="candidates"');
  });

  it("sends the debug flag on subsequent requests", async () => {
    const state = createState();
    const seen: boolean[] = [];
    const spy: FetchLike = async (url, init) => {
      seen.push((JSON.parse(init!.body!) as { debug: boolean }).debug);
      return mockServer()(url, init);
    };
    await submitQuery(state, "hi", spy);
    toggleDebug(state);
    await submitQuery(state, "hi", spy);
    expect(seen).toEqual([false, true]);
  });

  it("candidates arrive sorted by fused score descending", async () => {
    const state = createState();
    state.debug = true;
    await submitQuery(state, "How do I install Ubuntu on Windows?", mockServer());
    const candidates = state.entries[1].response?.candidates ?? [];
    const fused = candidates.map((c) => c.fused);
    expect(fused).toEqual([...fused].sort((a, b) => b - a));
  });
});

describe("every displayed number appears verbatim in the response body", () => {
  for (const name of ["answer_debug", "answer_debug_trouble"]) {
    it(`holds for the ${name} fixture`, async () => {
      const fixture = loadFixture(name);
      const state = createState();
      state.debug = true;
      await submitQuery(state, fixture.request.text, mockServer());
      const html = renderChat(state);
      const cells = [...html.matchAll(/<td>([^<]*)<\/td>/g)].map((m) => m[1]);
      const numbers = cells.filter((cell) => /^-?[\d.]+(e-?\d+)?$/.test(cell));
      expect(numbers.length).toBeGreaterThan(0);
      for (const value of numbers) {
        expect(fixture.body).toContain(value);
      }
      const idMatch = html.match(/<span class="qid">#(\d+)<\/span>/);
      expect(idMatch).not.toBeNull();
      expect(fixture.body).toContain(`"id":${idMatch![1]}`);
    });
  }
});

describe("failure handling", () => {
  it("network failure becomes an error entry and clears pending", async () => {
    const state = createState();
    const down: FetchLike = async () => {
      throw new Error("connection refused");
    };
    const entry = await submitQuery(state, "anything", down);
    expect(entry?.error).toBe(true);
    expect(state.pending).toBe(false);
    expect(renderChat(state)).toContain('class="bubble system error"');
    expect(renderChat(state)).toContain("connection refused");
  });

  it("http error status becomes an error entry", async () => {
    const state = createState();
    const entry = await submitQuery(state, "   ", mockServer());
    expect(entry).toBeNull(); // blank input never leaves the client
    const forced = await submitQuery(state, "x", async () => ({
      ok: false,
      status: 400,
      text: async () => "bad request",
    }));
    expect(forced?.error).toBe(true);
    expect(forced?.text).toContain("400");
  });

  it("rejects a second in-flight request", async () => {
    const state = createState();
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const slow: FetchLike = async (url, init) => {
      await gate;
      return mockServer()(url, init);
    };
    const first = submitQuery(state, "hi", slow);
    const second = await submitQuery(state, "hi again", slow);
    expect(second).toBeNull();
    release!();
    await first;
    expect(state.entries).toHaveLength(2);
  });
});

describe("misc rendering", () => {
  it("escapes markup in user text", () => {
    const state = createState();
    state.entries.push({ role: "user", text: "<script>alert(1)</script>" });
    expect(renderChat(state)).toContain("&lt;script&gt;");
  });

  it("empty candidate list renders the placeholder", () => {
    expect(renderCandidateTable([])).toContain("no candidates");
  });

  it("parses the recorded health response", async () => {
    const health = await getHealth(mockServer());
    expect(health.status).toBe("ok");
    expect(health.n_questions).toBe(13);
  });
});
