/**
 * Console state as a pure function of API responses plus in-flight
 * actions: `reduce` is side-effect free, so any session is replayable
 * from its event log.
 */

import type {
  ClusterDetail,
  ClusterSummary,
  Conflict,
  KeywordRow,
  QueueItem,
} from "./api.js";

export type Tab = "queue" | "conflicts" | "keywords" | "clusters";

export interface AppState {
  tab: Tab;
  modelVersion: number;
  queue: QueueItem[];
  /** Queue items the analyst answered this session, newest last. */
  decided: { target: string; is_pip: boolean; category: string | null }[];
  conflicts: Conflict[];
  keywords: KeywordRow[];
  clusters: ClusterSummary[];
  openCluster: ClusterDetail | null;
  labelerId: string;
  offline: boolean;
  pendingCount: number;
  notice: string | null;
}

export type Event =
  | { type: "tab-selected"; tab: Tab }
  | { type: "labeler-set"; labelerId: string }
  | { type: "queue-loaded"; modelVersion: number; items: QueueItem[] }
  | { type: "label-decided"; target: string; is_pip: boolean; category: string | null }
  | { type: "label-queued"; pendingCount: number }
  | { type: "label-flushed"; pendingCount: number }
  | { type: "conflicts-loaded"; conflicts: Conflict[] }
  | { type: "conflict-resolved"; target: string }
  | { type: "keywords-loaded"; keywords: KeywordRow[] }
  | { type: "keyword-updated"; keyword: KeywordRow }
  | { type: "clusters-loaded"; clusters: ClusterSummary[] }
  | { type: "cluster-opened"; detail: ClusterDetail }
  | { type: "cluster-missing"; id: string }
  | { type: "retrained"; modelVersion: number }
  | { type: "api-offline" }
  | { type: "api-online" };

export function initialState(labelerId: string): AppState {
  return {
    tab: "queue",
    modelVersion: 0,
    queue: [],
    decided: [],
    conflicts: [],
    keywords: [],
    clusters: [],
    openCluster: null,
    labelerId,
    offline: false,
    pendingCount: 0,
    notice: null,
  };
}

export function reduce(state: AppState, event: Event): AppState {
  switch (event.type) {
    case "tab-selected":
      return { ...state, tab: event.tab, notice: null };
    case "labeler-set":
      return { ...state, labelerId: event.labelerId };
    case "queue-loaded":
      return {
        ...state,
        modelVersion: event.modelVersion,
        queue: event.items.filter(
          (it) => !state.decided.some((d) => d.target === it.post_id),
        ),
      };
    case "label-decided":
      return {
        ...state,
        queue: state.queue.filter((it) => it.post_id !== event.target),
        decided: [
          ...state.decided,
          { target: event.target, is_pip: event.is_pip, category: event.category },
        ],
      };
    case "label-queued":
      return {
        ...state,
        pendingCount: event.pendingCount,
        notice: "API unreachable; label queued for retry",
      };
    case "label-flushed":
      return {
        ...state,
        pendingCount: event.pendingCount,
        notice: event.pendingCount === 0 ? null : state.notice,
      };
    case "conflicts-loaded":
      return { ...state, conflicts: event.conflicts };
    case "conflict-resolved":
      return {
        ...state,
        conflicts: state.conflicts.filter((c) => c.target !== event.target),
      };
    case "keywords-loaded":
      return { ...state, keywords: event.keywords };
    case "keyword-updated": {
      const rest = state.keywords.filter(
        (kw) => kw.kind !== event.keyword.kind || kw.value !== event.keyword.value,
      );
      return { ...state, keywords: [...rest, event.keyword] };
    }
    case "clusters-loaded":
      return { ...state, clusters: event.clusters, openCluster: null };
    case "cluster-opened":
      return { ...state, openCluster: event.detail };
    case "cluster-missing":
      return { ...state, openCluster: null, notice: `cluster ${event.id} not found` };
    case "retrained":
      return { ...state, modelVersion: event.modelVersion, notice: "model retrained" };
    case "api-offline":
      return { ...state, offline: true };
    case "api-online":
      return { ...state, offline: false };
  }
}

export function replay(labelerId: string, events: Event[]): AppState {
  return events.reduce(reduce, initialState(labelerId));
}
