/**
 * Typed client for the piphunter analyst API.
 *
 * Label submissions carry a client idempotency key (labeler + target) and
 * are tracked so a retry after a network failure never double-submits.
 * Failed mutations land in a pending queue that `flush()` replays once the
 * API is reachable again.
 */

export interface QueueItem {
  post_id: string;
  text: string;
  hashtags: string[];
  confidence: number;
  suggested_category: string | null;
  language: string | null;
  uncertainty: number;
}

export interface ConflictLabel {
  labeler_id: string;
  is_pip: boolean;
  category: string | null;
  time: number;
}

export interface Conflict {
  target: string;
  labels: ConflictLabel[];
}

export interface KeywordRow {
  kind: string;
  value: string;
  state: "active" | "blocked";
  blocked_rounds: number;
  latest_rcp: number | null;
  rounds_seen: number;
}

export interface ClusterSummary {
  id: string;
  n_nodes: number;
  n_accounts: number;
  n_contacts: number;
  n_pips: number;
  is_singleton: boolean;
}

export interface ClusterNode {
  id: string;
  kind: string;
  pip_count: number;
}

export interface ClusterEdge {
  source: string;
  target: string;
  weight: number;
}

export interface ClusterDetail {
  id: string;
  nodes: ClusterNode[];
  edges: ClusterEdge[];
  pip_ids: string[];
  contact_kind_histogram: Record<string, number>;
  category_histogram: Record<string, number>;
}

export interface LabelSubmission {
  target: string;
  is_pip: boolean;
  category?: string | null;
  labeler_id: string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

interface PendingAction {
  key: string;
  path: string;
  body: unknown;
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: unknown) {
    super(`API error ${status}`);
  }
}

export function labelKey(label: LabelSubmission): string {
  return `${label.labeler_id}::${label.target}`;
}

export class ConsoleApi {
  private submitted = new Set<string>();
  readonly pending: PendingAction[] = [];

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => null));
    return (await resp.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => null));
    return (await resp.json()) as T;
  }

  queue(limit = 50): Promise<{ model_version: number; items: QueueItem[] }> {
    return this.getJson(`/queue?limit=${limit}`);
  }

  conflicts(): Promise<{ conflicts: Conflict[] }> {
    return this.getJson("/conflicts");
  }

  keywords(): Promise<{ keywords: KeywordRow[] }> {
    return this.getJson("/keywords");
  }

  clusters(): Promise<{ clusters: ClusterSummary[] }> {
    return this.getJson("/clusters");
  }

  cluster(id: string): Promise<ClusterDetail> {
    return this.getJson(`/clusters/${encodeURIComponent(id)}`);
  }

  stats(): Promise<Record<string, unknown>> {
    return this.getJson("/stats");
  }

  retrain(): Promise<{ model_version: number; n_samples: number }> {
    return this.postJson("/retrain", {});
  }

  mutateKeyword(action: "add" | "block" | "unblock", kind: string, value: string):
      Promise<KeywordRow> {
    return this.postJson("/keywords", { action, kind, value });
  }

  resolveConflict(target: string, is_pip: boolean, labeler_id: string,
                  category?: string | null): Promise<{ conflicts: number }> {
    return this.postJson("/conflicts/resolve", { target, is_pip, labeler_id, category });
  }

  /**
   * Submit a label at most once per (labeler, target). A network failure
   * queues the submission for `flush()`; an API rejection propagates.
   */
  async submitLabel(label: LabelSubmission): Promise<"submitted" | "duplicate" | "queued"> {
    const key = labelKey(label);
    if (this.submitted.has(key)) return "duplicate";
    try {
      await this.postJson("/labels", label);
    } catch (err) {
      if (err instanceof ApiError) throw err; // server said no: do not retry blindly
      if (!this.pending.some((p) => p.key === key)) {
        this.pending.push({ key, path: "/labels", body: label });
      }
      return "queued";
    }
    this.submitted.add(key);
    return "submitted";
  }

  /** Replay queued mutations in order; stops at the first failure. */
  async flush(): Promise<number> {
    let replayed = 0;
    while (this.pending.length > 0) {
      const action = this.pending[0];
      if (this.submitted.has(action.key)) {
        this.pending.shift();
        continue;
      }
      try {
        await this.postJson(action.path, action.body);
      } catch (err) {
        if (err instanceof ApiError && err.status === 400) {
          this.pending.shift(); // malformed stays malformed: drop it
          continue;
        }
        break;
      }
      this.submitted.add(action.key);
      this.pending.shift();
      replayed += 1;
    }
    return replayed;
  }

  hasSubmitted(label: LabelSubmission): boolean {
    return this.submitted.has(labelKey(label));
  }
}
