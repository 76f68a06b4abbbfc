/**
 * DOM wiring: holds the event log, re-renders on every event, and maps
 * clicks back to API calls. All logic lives in api/state/render; this
 * file only glues them to the page.
 */

import { ApiError, ConsoleApi } from "./api.js";
import { initialState, reduce, type AppState, type Event, type Tab } from "./state.js";
import { renderApp } from "./render.js";

const api = new ConsoleApi("");
const events: Event[] = [];
let state: AppState = initialState(localStorage.getItem("labeler_id") ?? "analyst");
const root = document.getElementById("app")!;

function dispatch(event: Event): void {
  events.push(event);
  state = reduce(state, event);
  root.innerHTML = renderApp(state);
}

async function refresh(tab: Tab): Promise<void> {
  try {
    if (tab === "queue") {
      const q = await api.queue();
      dispatch({ type: "queue-loaded", modelVersion: q.model_version, items: q.items });
    } else if (tab === "conflicts") {
      const c = await api.conflicts();
      dispatch({ type: "conflicts-loaded", conflicts: c.conflicts });
    } else if (tab === "keywords") {
      const k = await api.keywords();
      dispatch({ type: "keywords-loaded", keywords: k.keywords });
    } else {
      const c = await api.clusters();
      dispatch({ type: "clusters-loaded", clusters: c.clusters });
    }
    dispatch({ type: "api-online" });
  } catch (err) {
    if (!(err instanceof ApiError)) dispatch({ type: "api-offline" });
  }
}

async function submitLabel(target: string, isPip: boolean, category: string | null) {
  const label = {
    target,
    is_pip: isPip,
    category: isPip ? category : null,
    labeler_id: state.labelerId,
  };
  const outcome = await api.submitLabel(label).catch(() => "queued" as const);
  dispatch({ type: "label-decided", target, is_pip: isPip, category: label.category });
  if (outcome === "queued") {
    dispatch({ type: "label-queued", pendingCount: api.pending.length });
  }
}

root.addEventListener("click", (raw) => {
  const el = raw.target as HTMLElement;
  const tab = el.dataset.tab as Tab | undefined;
  if (tab) {
    dispatch({ type: "tab-selected", tab });
    void refresh(tab);
    return;
  }
  const role = el.dataset.role;
  const item = el.closest<HTMLElement>("[data-post]");
  if (role && item) {
    const category =
      item.querySelector<HTMLSelectElement>('[data-role="category"]')?.value ?? null;
    void submitLabel(item.dataset.post!, role === "confirm", category);
    return;
  }
  const conflict = el.closest<HTMLElement>(".conflict[data-target]");
  if (role?.startsWith("resolve") && conflict) {
    const target = conflict.dataset.target!;
    void api
      .resolveConflict(target, role === "resolve-pip", state.labelerId)
      .then(() => dispatch({ type: "conflict-resolved", target }));
    return;
  }
  const row = el.closest<HTMLElement>("tr[data-kind]");
  if ((role === "block" || role === "unblock") && row) {
    void api
      .mutateKeyword(role, row.dataset.kind!, row.dataset.value!)
      .then((kw) => dispatch({ type: "keyword-updated", keyword: kw }));
    return;
  }
  const clusterRow = el.closest<HTMLElement>("tr[data-cluster]");
  if (clusterRow) {
    const id = clusterRow.dataset.cluster!;
    void api
      .cluster(id)
      .then((detail) => dispatch({ type: "cluster-opened", detail }))
      .catch(() => dispatch({ type: "cluster-missing", id }));
    return;
  }
  if (role === "back") {
    void refresh("clusters");
  }
});

setInterval(() => {
  if (api.pending.length > 0) {
    void api.flush().then(() => {
      dispatch({ type: "label-flushed", pendingCount: api.pending.length });
      if (api.pending.length === 0) dispatch({ type: "api-online" });
    });
  }
}, 5000);

void refresh("queue");
