"""Account/contact graph over PIPs and campaign identification.

Campaigns are the connected components of an undirected graph whose nodes
are PIP accounts and contacts; an edge joins two nodes whenever they share
at least one PIP. URL contacts participate at FQDN granularity and mention
contacts unify with the account node of the same id.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Node:
    kind: str  # "account" | "contact"
    id: str
    pip_count: int


@dataclass
class PipGraph:
    nodes: dict[str, Node] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)  # shared_pip_count
    contact_kind: dict[str, str] = field(default_factory=dict)  # node id -> contact kind
    node_pips: dict[str, list[str]] = field(default_factory=dict)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {nid: set() for nid in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "id": n.id,
                    "kind": n.kind,
                    "pip_count": n.pip_count,
                    "contact_kind": self.contact_kind.get(n.id),
                }
                for n in sorted(self.nodes.values(), key=lambda n: n.id)
            ],
            "edges": [
                {"source": a, "target": b, "shared_pip_count": w}
                for (a, b), w in sorted(self.edges.items())
            ],
        }


@dataclass
class Campaign:
    component_id: str
    node_ids: list[str]
    pip_ids: list[str]
    n_accounts: int
    n_contacts: int
    contact_kind_histogram: dict[str, int]
    category_histogram: dict[str, int]
    is_singleton: bool


def _contact_node_id(contact) -> str:
    # URL contacts cluster by FQDN; mentions merge with account nodes.
    if contact.kind == "URL":
        return f"contact:URL:{contact.fqdn or contact.value}"
    if contact.kind == "TwitterMention":
        return f"account:{contact.value}"
    return f"contact:{contact.kind}:{contact.value}"


def build_graph(pips: list[tuple[object, str, list]]) -> PipGraph:
    """pips: (post, author_id, contacts) triples.

    One account node per distinct author, one contact node per distinct
    (kind, value); every pair of nodes sharing a PIP is joined by an edge
    weighted with the shared-PIP count.
    """
    pip_counts: dict[str, int] = defaultdict(int)
    node_kind: dict[str, str] = {}
    contact_kind: dict[str, str] = {}
    edge_weights: dict[tuple[str, str], int] = defaultdict(int)
    node_pips: dict[str, set] = defaultdict(set)

    for post, author_id, post_contacts in pips:
        account_node = f"account:{author_id}"
        node_kind[account_node] = "account"
        members = {account_node}
        for contact in post_contacts:
            nid = _contact_node_id(contact)
            if nid.startswith("account:"):
                node_kind.setdefault(nid, "account")
            else:
                node_kind[nid] = "contact"
                contact_kind[nid] = contact.kind
            members.add(nid)
        for nid in members:
            pip_counts[nid] += 1
            node_pips[nid].add(post.id)
        ordered = sorted(members)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                edge_weights[(ordered[i], ordered[j])] += 1

    graph = PipGraph(contact_kind=contact_kind)
    for nid, kind in node_kind.items():
        graph.nodes[nid] = Node(kind=kind, id=nid, pip_count=pip_counts[nid])
    graph.edges = dict(edge_weights)
    graph.node_pips = {nid: sorted(p) for nid, p in node_pips.items()}
    return graph


def flood_fill(graph: PipGraph) -> list[Campaign]:
    """Connected components by BFS; deterministic component ids from the
    smallest contained node id, independent of input ordering."""
    adj = graph.adjacency()
    visited: set[str] = set()
    components: list[list[str]] = []
    for start in sorted(graph.nodes):
        if start in visited:
            continue
        queue = [start]
        visited.add(start)
        comp = []
        while queue:
            cur = queue.pop()
            comp.append(cur)
            for nxt in adj[cur]:
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
        components.append(sorted(comp))

    node_pips = graph.node_pips
    campaigns = []
    for comp in sorted(components, key=lambda c: c[0]):
        accounts = [n for n in comp if graph.nodes[n].kind == "account"]
        contact_nodes = [n for n in comp if graph.nodes[n].kind == "contact"]
        kind_hist: dict[str, int] = defaultdict(int)
        for n in contact_nodes:
            kind_hist[graph.contact_kind.get(n, "Other")] += 1
        pip_ids = sorted({p for n in comp for p in node_pips.get(n, [])})
        campaigns.append(
            Campaign(
                component_id=comp[0],
                node_ids=comp,
                pip_ids=pip_ids,
                n_accounts=len(accounts),
                n_contacts=len(contact_nodes),
                contact_kind_histogram=dict(kind_hist),
                category_histogram={},
                is_singleton=len(accounts) == 1 and not contact_nodes,
            )
        )
    return campaigns


def attach_categories(campaigns: list[Campaign], category_by_pip: dict[str, str]) -> None:
    for campaign in campaigns:
        hist: dict[str, int] = defaultdict(int)
        for pid in campaign.pip_ids:
            cat = category_by_pip.get(pid)
            if cat:
                hist[cat] += 1
        campaign.category_histogram = dict(hist)


def campaign_stats(campaigns: list[Campaign]) -> dict:
    """Singleton share plus campaign counts bucketed by contact count and
    by distinct promoted category count."""
    n = len(campaigns)
    if n == 0:
        return {
            "n_campaigns": 0,
            "singleton_fraction": 0.0,
            "by_contact_count": {"1": 0.0, "2": 0.0, ">=3": 0.0},
            "by_category_count": {"1": 0.0, "2": 0.0, ">=3": 0.0},
        }

    def bucket(count: int) -> str:
        return "1" if count == 1 else "2" if count == 2 else ">=3"

    singleton = sum(1 for c in campaigns if c.is_singleton)
    contact_hist = {"1": 0, "2": 0, ">=3": 0}
    for c in campaigns:
        if c.n_contacts >= 1:
            contact_hist[bucket(c.n_contacts)] += 1
    with_contacts = sum(contact_hist.values())
    category_hist = {"1": 0, "2": 0, ">=3": 0}
    for c in campaigns:
        k = len(c.category_histogram)
        if k >= 1:
            category_hist[bucket(k)] += 1
    with_categories = sum(category_hist.values())
    return {
        "n_campaigns": n,
        "singleton_fraction": singleton / n,
        "by_contact_count": {
            k: (v / with_contacts if with_contacts else 0.0)
            for k, v in contact_hist.items()
        },
        "by_category_count": {
            k: (v / with_categories if with_categories else 0.0)
            for k, v in category_hist.items()
        },
    }
