/**
 * HTML renderers: pure functions from state to markup strings. The DOM
 * wiring in main.ts swaps the rendered view in and attaches handlers by
 * data attributes, keeping everything here unit-testable without a DOM.
 */

import type { AppState } from "./state.js";
import type { Conflict, KeywordRow, QueueItem } from "./api.js";
import { forceLayout, type Layout } from "./layout.js";

const CATEGORIES = [
  "Pornography", "Gambling", "IllegalDrug", "FakeCertificate", "Surrogacy",
  "WildlifeProduct", "MoneyLaundering", "Weapon", "DataLeakage", "Harassment",
  "CrowdsourcingManipulation",
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderQueueItem(item: QueueItem): string {
  const category = item.suggested_category ?? "";
  const options = CATEGORIES.map(
    (c) =>
      `<option value="${c}"${c === category ? " selected" : ""}>${c}</option>`,
  ).join("");
  return `
  <article class="queue-item" data-post="${escapeHtml(item.post_id)}">
    <p class="text">${escapeHtml(item.text)}</p>
    <p class="meta">
      <span class="confidence">confidence ${item.confidence.toFixed(3)}</span>
      ${item.language ? `<span class="lang">${escapeHtml(item.language)}</span>` : ""}
      ${item.hashtags.map((h) => `<span class="tag">#${escapeHtml(h)}</span>`).join(" ")}
    </p>
    <select data-role="category">${options}</select>
    <button data-role="confirm">PIP</button>
    <button data-role="reject">Not PIP</button>
  </article>`;
}

export function renderQueue(state: AppState): string {
  if (state.queue.length === 0) {
    return `<section class="queue empty"><p>Queue is empty — run a hunt round or retrain.</p></section>`;
  }
  return `<section class="queue">
    <p class="model">model v${state.modelVersion} · ${state.queue.length} items</p>
    ${state.queue.map(renderQueueItem).join("\n")}
  </section>`;
}

/** Side-by-side resolution view of every disagreeing label. */
export function renderConflict(conflict: Conflict): string {
  const cells = conflict.labels
    .map(
      (l) => `<div class="label-card" data-labeler="${escapeHtml(l.labeler_id)}">
      <p>${escapeHtml(l.labeler_id)}</p>
      <p>${l.is_pip ? "PIP" : "not PIP"}${l.category ? ` · ${escapeHtml(l.category)}` : ""}</p>
    </div>`,
    )
    .join("\n");
  return `<article class="conflict" data-target="${escapeHtml(conflict.target)}">
    <div class="side-by-side">${cells}</div>
    <button data-role="resolve-pip">Resolve: PIP</button>
    <button data-role="resolve-benign">Resolve: not PIP</button>
  </article>`;
}

export function renderConflicts(state: AppState): string {
  if (state.conflicts.length === 0) {
    return `<section class="conflicts empty"><p>No open conflicts.</p></section>`;
  }
  return `<section class="conflicts">${state.conflicts.map(renderConflict).join("\n")}</section>`;
}

export function renderKeywordRow(kw: KeywordRow): string {
  const rcp = kw.latest_rcp === null ? "—" : `${(kw.latest_rcp * 100).toFixed(2)}%`;
  const action = kw.state === "active" ? "block" : "unblock";
  return `<tr data-kind="${escapeHtml(kw.kind)}" data-value="${escapeHtml(kw.value)}">
    <td>${escapeHtml(kw.kind)}</td>
    <td>${escapeHtml(kw.value)}</td>
    <td class="state">${kw.state}</td>
    <td class="rcp">${rcp}</td>
    <td><button data-role="${action}">${action}</button></td>
  </tr>`;
}

export function renderKeywords(state: AppState): string {
  if (state.keywords.length === 0) {
    return `<section class="keywords empty"><p>No keywords yet — add a seed hashtag to start hunting.</p></section>`;
  }
  const rows = [...state.keywords]
    .sort((a, b) => (a.kind + a.value).localeCompare(b.kind + b.value))
    .map(renderKeywordRow)
    .join("\n");
  return `<section class="keywords"><table>
    <thead><tr><th>kind</th><th>value</th><th>state</th><th>RCP</th><th></th></tr></thead>
    <tbody>${rows}</tbody>
  </table></section>`;
}

export function renderClusterSvg(layout: Layout): string {
  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  const edges = layout.edges
    .map((e) => {
      const a = pos.get(e.source)!;
      const b = pos.get(e.target)!;
      return `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" stroke-width="${Math.min(e.weight, 6)}" />`;
    })
    .join("\n");
  const nodes = layout.nodes
    .map(
      (n) =>
        `<circle data-node="${escapeHtml(n.id)}" class="${n.kind}" cx="${n.x.toFixed(1)}" cy="${n.y.toFixed(1)}" r="${n.radius.toFixed(1)}"><title>${escapeHtml(n.id)}</title></circle>`,
    )
    .join("\n");
  return `<svg viewBox="0 0 ${layout.width} ${layout.height}" class="cluster-graph">
    <g class="edges">${edges}</g>
    <g class="nodes">${nodes}</g>
  </svg>`;
}

export function renderClusters(state: AppState): string {
  if (state.openCluster) {
    const layout = forceLayout(state.openCluster);
    return `<section class="cluster-detail" data-cluster="${escapeHtml(state.openCluster.id)}">
      <button data-role="back">back</button>
      ${renderClusterSvg(layout)}
    </section>`;
  }
  if (state.clusters.length === 0) {
    return `<section class="clusters empty"><p>No campaign clusters yet.</p></section>`;
  }
  const rows = state.clusters
    .map(
      (c) => `<tr data-cluster="${escapeHtml(c.id)}">
      <td>${escapeHtml(c.id)}</td><td>${c.n_nodes}</td><td>${c.n_accounts}</td>
      <td>${c.n_contacts}</td><td>${c.n_pips}</td>
    </tr>`,
    )
    .join("\n");
  return `<section class="clusters"><table>
    <thead><tr><th>cluster</th><th>nodes</th><th>accounts</th><th>contacts</th><th>PIPs</th></tr></thead>
    <tbody>${rows}</tbody>
  </table></section>`;
}

export function renderApp(state: AppState): string {
  const tabs = (["queue", "conflicts", "keywords", "clusters"] as const)
    .map(
      (t) =>
        `<button data-tab="${t}" class="${t === state.tab ? "active" : ""}">${t}</button>`,
    )
    .join("");
  const body =
    state.tab === "queue"
      ? renderQueue(state)
      : state.tab === "conflicts"
        ? renderConflicts(state)
        : state.tab === "keywords"
          ? renderKeywords(state)
          : renderClusters(state);
  const banner = state.offline
    ? `<div class="banner offline">API unreachable — ${state.pendingCount} pending submissions will retry</div>`
    : state.notice
      ? `<div class="banner">${escapeHtml(state.notice)}</div>`
      : "";
  return `<nav>${tabs}</nav>${banner}<main>${body}</main>`;
}
