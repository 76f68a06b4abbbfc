import { describe, expect, it } from "vitest";

import type { QueueItem } from "../src/api.js";
import { forceLayout } from "../src/layout.js";
import {
  escapeHtml,
  renderApp,
  renderClusterSvg,
  renderConflict,
  renderKeywords,
  renderQueue,
} from "../src/render.js";
import { initialState, reduce } from "../src/state.js";

function item(id: string): QueueItem {
  return {
    post_id: id,
    text: "加微信 <script>alert(1)</script>",
    hashtags: ["tag1"],
    confidence: 0.73,
    suggested_category: "Gambling",
    language: "zh",
    uncertainty: 0.23,
  };
}

describe("escapeHtml", () => {
  it("neutralizes markup in untrusted post text", () => {
    const html = renderQueue(
      reduce(initialState("ana"), {
        type: "queue-loaded", modelVersion: 1, items: [item("p1")],
      }),
    );
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
    expect(escapeHtml('a"b')).toBe("a&quot;b");
  });
});

describe("queue view", () => {
  it("shows an empty-state prompt when there is nothing to label", () => {
    expect(renderQueue(initialState("ana"))).toContain("Queue is empty");
  });

  it("renders confirm/reject controls and the suggested category", () => {
    const state = reduce(initialState("ana"), {
      type: "queue-loaded", modelVersion: 3, items: [item("p1")],
    });
    const html = renderQueue(state);
    expect(html).toContain('data-post="p1"');
    expect(html).toContain('data-role="confirm"');
    expect(html).toContain('data-role="reject"');
    expect(html).toContain('<option value="Gambling" selected>');
    expect(html).toContain("model v3");
  });
});

describe("conflict view", () => {
  it("renders both labels side by side with resolution buttons", () => {
    const html = renderConflict({
      target: "p9",
      labels: [
        { labeler_id: "ana", is_pip: true, category: "Gambling", time: 1 },
        { labeler_id: "ben", is_pip: false, category: null, time: 2 },
      ],
    });
    expect(html).toContain('data-target="p9"');
    expect(html).toContain('data-labeler="ana"');
    expect(html).toContain('data-labeler="ben"');
    expect(html).toContain("side-by-side");
    expect(html).toContain('data-role="resolve-pip"');
    expect(html).toContain('data-role="resolve-benign"');
  });
});

describe("keyword panel", () => {
  const kw = {
    kind: "hashtag", value: "promo", state: "active" as const,
    blocked_rounds: 0, latest_rcp: 0.0137, rounds_seen: 4,
  };

  it("shows the empty-state prompt without keywords", () => {
    expect(renderKeywords(initialState("ana"))).toContain("add a seed hashtag");
  });

  it("shows state, formatted RCP, and the matching action", () => {
    let state = reduce(initialState("ana"), {
      type: "keywords-loaded",
      keywords: [kw, { ...kw, value: "dead", state: "blocked", latest_rcp: null }],
    });
    const html = renderKeywords(state);
    expect(html).toContain("1.37%");
    expect(html).toContain("—"); // undefined RCP
    expect(html).toMatch(/data-value="promo"[\s\S]*?data-role="block"/);
    expect(html).toMatch(/data-value="dead"[\s\S]*?data-role="unblock"/);
  });
});

describe("cluster view", () => {
  it("scales node circles with pip count", () => {
    const layout = forceLayout({
      id: "c",
      nodes: [
        { id: "small", kind: "contact", pip_count: 1 },
        { id: "big", kind: "account", pip_count: 100 },
      ],
      edges: [],
      pip_ids: [],
      contact_kind_histogram: {},
      category_histogram: {},
    });
    const svg = renderClusterSvg(layout);
    const radius = (id: string) =>
      Number(new RegExp(`data-node="${id}"[^/]*r="([0-9.]+)"`).exec(svg)![1]);
    expect(radius("big")).toBeGreaterThan(radius("small"));
    expect(svg).toContain("<svg");
  });

  it("renders a banner when offline with pending submissions", () => {
    let state = initialState("ana");
    state = reduce(state, { type: "api-offline" });
    state = reduce(state, { type: "label-queued", pendingCount: 3 });
    const html = renderApp(state);
    expect(html).toContain("3 pending submissions");
  });
});
