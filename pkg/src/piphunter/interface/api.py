"""Analyst-facing HTTP API: labeling queue, conflict resolution, keyword
management, cluster export, corpus stats, and classifier retraining.

Every mutation goes through the store journal, so an acknowledged label
survives a process restart. Retrains are exclusive: a second concurrent
request is rejected with 409.
"""

from __future__ import annotations

import threading
from collections import defaultdict

from fastapi import FastAPI, HTTPException

from .. import campaigns as campaigns_mod
from .. import classify, monitor
from ..contacts import Contact
from ..errors import DegenerateTrainingSet, EmptyStore
from ..hunt import Keyword, KeywordSet
from ..store import LabelRecord, Store
from .runtime import vectorize


def _keyword_payload(kw: Keyword) -> dict:
    latest = kw.history[-1] if kw.history else None
    return {
        "kind": kw.kind,
        "value": kw.value,
        "state": kw.state,
        "blocked_rounds": kw.blocked_rounds,
        "latest_rcp": latest.rcp if latest else None,
        "rounds_seen": len(kw.history),
    }


def _contact_from_dict(data: dict) -> Contact:
    return Contact(
        kind=data["kind"],
        value=data["value"],
        fqdn=data.get("fqdn", ""),
        source=data.get("source", "post"),
        post_id=data.get("post_id"),
        account_id=data.get("account_id"),
    )


class ApiState:
    def __init__(self, store: Store, keywords: KeywordSet | None = None,
                 vocab=None, binary_model=None, train_config=None,
                 categorizer=None):
        self.store = store
        self.keywords = keywords if keywords is not None else KeywordSet()
        self.vocab = vocab
        self.binary_model = binary_model
        self.train_config = train_config or classify.TrainConfig()
        self.categorizer = categorizer
        self.model_version = 0
        self.retrain_lock = threading.Lock()


def _labels_by_target(store: Store) -> dict[str, list[LabelRecord]]:
    grouped: dict[str, list[LabelRecord]] = defaultdict(list)
    for rec in store.all("labels"):
        grouped[rec.target].append(rec)
    return grouped


def _unresolved_conflicts(store: Store) -> list[dict]:
    out = []
    for target, recs in sorted(_labels_by_target(store).items()):
        if any(r.resolved_conflict for r in recs):
            continue
        plain = [r for r in recs if not r.resolved_conflict]
        if len({(r.is_pip, r.category) for r in plain}) > 1:
            out.append(
                {
                    "target": target,
                    "labels": [
                        {
                            "labeler_id": r.labeler_id,
                            "is_pip": r.is_pip,
                            "category": r.category,
                            "time": r.time,
                        }
                        for r in sorted(plain, key=lambda r: r.labeler_id)
                    ],
                }
            )
    return out


def _consensus_labels(store: Store) -> dict[str, bool]:
    """target -> is_pip for targets with an unambiguous human verdict."""
    out: dict[str, bool] = {}
    for target, recs in _labels_by_target(store).items():
        resolved = [r for r in recs if r.resolved_conflict]
        if resolved:
            out[target] = resolved[-1].is_pip
            continue
        verdicts = {r.is_pip for r in recs}
        if len(verdicts) == 1:
            out[target] = verdicts.pop()
    return out


def create_api(state: ApiState) -> FastAPI:
    app = FastAPI(title="piphunter")
    store = state.store

    @app.get("/queue")
    def queue(limit: int = 50):
        labeled = set(_labels_by_target(store))
        items = []
        for post in store.pip_posts():
            if post.id in labeled:
                continue
            conf = float((post.label or {}).get("confidence", 0.5))
            items.append(
                {
                    "post_id": post.id,
                    "text": post.text,
                    "hashtags": post.hashtags,
                    "confidence": conf,
                    "suggested_category": (
                        state.categorizer(post.text) if state.categorizer else None
                    ),
                    "language": (post.label or {}).get("language"),
                    "uncertainty": abs(conf - 0.5),
                }
            )
        items.sort(key=lambda it: (it["uncertainty"], it["post_id"]))
        return {"model_version": state.model_version, "items": items[:limit]}

    @app.post("/labels")
    def post_label(payload: dict):
        missing = [k for k in ("target", "is_pip", "labeler_id") if k not in payload]
        if missing:
            raise HTTPException(status_code=400, detail={"missing_fields": missing})
        if not isinstance(payload["is_pip"], bool):
            raise HTTPException(status_code=400, detail={"is_pip": "must be boolean"})
        if store.get("posts", payload["target"]) is None:
            raise HTTPException(status_code=404, detail="unknown target post")
        rec = LabelRecord(
            target=payload["target"],
            is_pip=payload["is_pip"],
            category=payload.get("category"),
            labeler_id=payload["labeler_id"],
            time=float(payload.get("time", 0.0)),
        )
        store.put_label(rec)
        return {"id": rec.id, "conflicts": len(_unresolved_conflicts(store))}

    @app.get("/conflicts")
    def conflicts():
        return {"conflicts": _unresolved_conflicts(store)}

    @app.post("/conflicts/resolve")
    def resolve_conflict(payload: dict):
        missing = [k for k in ("target", "is_pip", "labeler_id") if k not in payload]
        if missing:
            raise HTTPException(status_code=400, detail={"missing_fields": missing})
        if store.get("posts", payload["target"]) is None:
            raise HTTPException(status_code=404, detail="unknown target post")
        rec = LabelRecord(
            target=payload["target"],
            is_pip=bool(payload["is_pip"]),
            category=payload.get("category"),
            labeler_id=payload["labeler_id"],
            time=float(payload.get("time", 0.0)),
            resolved_conflict=True,
        )
        store.put_label(rec)
        return {"id": rec.id, "conflicts": len(_unresolved_conflicts(store))}

    @app.get("/keywords")
    def keywords():
        return {"keywords": [_keyword_payload(kw) for kw in state.keywords.all()]}

    @app.post("/keywords")
    def mutate_keyword(payload: dict):
        action = payload.get("action")
        kind, value = payload.get("kind"), payload.get("value")
        if action not in ("add", "block", "unblock") or not kind or not value:
            raise HTTPException(
                status_code=400,
                detail={"action": "must be add|block|unblock with kind and value"},
            )
        kw = state.keywords.get(kind, value)
        if action == "add":
            if kw is None:
                kw = Keyword(kind=kind, value=value)
                state.keywords.add(kw)
        elif kw is None:
            raise HTTPException(status_code=404, detail="unknown keyword")
        elif action == "block":
            kw.state = "blocked"
            kw.blocked_rounds = 0
        else:
            kw.state = "active"
            kw.blocked_rounds = 0
        store.put_keyword(
            {"kind": kw.kind, "value": kw.value, "state": kw.state}
        )
        return _keyword_payload(kw)

    def _build_campaigns():
        by_post: dict[str, list[Contact]] = defaultdict(list)
        for data in store.all("contacts"):
            if data.get("post_id"):
                by_post[data["post_id"]].append(_contact_from_dict(data))
        triples = [
            (post, post.author_id, by_post.get(post.id, []))
            for post in store.pip_posts()
        ]
        graph = campaigns_mod.build_graph(triples)
        found = campaigns_mod.flood_fill(graph)
        campaigns_mod.attach_categories(
            found,
            {
                p.id: (p.label or {}).get("category")
                for p in store.pip_posts()
                if (p.label or {}).get("category")
            },
        )
        return graph, found

    @app.get("/clusters")
    def clusters():
        graph, found = _build_campaigns()
        return {
            "clusters": [
                {
                    "id": c.component_id,
                    "n_nodes": len(c.node_ids),
                    "n_accounts": c.n_accounts,
                    "n_contacts": c.n_contacts,
                    "n_pips": len(c.pip_ids),
                    "is_singleton": c.is_singleton,
                }
                for c in found
            ]
        }

    @app.get("/clusters/{cluster_id:path}")
    def cluster_detail(cluster_id: str):
        graph, found = _build_campaigns()
        match = next((c for c in found if c.component_id == cluster_id), None)
        if match is None:
            raise HTTPException(status_code=404, detail="unknown cluster")
        members = set(match.node_ids)
        payload = graph.to_json_dict()
        return {
            "id": match.component_id,
            "nodes": [n for n in payload["nodes"] if n["id"] in members],
            "edges": [
                e for e in payload["edges"]
                if e["source"] in members and e["target"] in members
            ],
            "pip_ids": match.pip_ids,
            "contact_kind_histogram": match.contact_kind_histogram,
            "category_histogram": match.category_histogram,
        }

    @app.get("/stats")
    def stats():
        try:
            report = monitor.corpus_report(store)
        except EmptyStore:
            report = {"n_posts": 0, "n_pips": 0}
        multi = [recs for recs in _labels_by_target(store).values() if len(recs) > 1]
        agree = sum(
            1 for recs in multi
            if len({(r.is_pip, r.category) for r in recs if not r.resolved_conflict}) <= 1
        )
        report["labeler_agreement"] = agree / len(multi) if multi else None
        report["model_version"] = state.model_version
        report["n_labels"] = store.count("labels")
        return report

    @app.post("/retrain")
    def retrain():
        if state.vocab is None:
            raise HTTPException(status_code=400, detail="no vocabulary loaded")
        if not state.retrain_lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="retrain already running")
        try:
            consensus = _consensus_labels(store)
            samples = []
            for target, is_pip in consensus.items():
                post = store.get("posts", target)
                if post is not None:
                    samples.append((vectorize(post.text, state.vocab), is_pip))
            try:
                model = classify.train_binary(
                    samples, state.train_config, dim=len(state.vocab.term_index)
                )
            except DegenerateTrainingSet as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            state.binary_model = model
            state.model_version += 1
            # Re-score flagged posts so the queue reorders deterministically.
            for post in store.pip_posts():
                vec = vectorize(post.text, state.vocab)
                conf = classify.predict_binary(model, vec).confidence
                post.label = dict(post.label or {}, confidence=conf)
                store.put_post(post)
            return {"model_version": state.model_version, "n_samples": len(samples)}
        finally:
            state.retrain_lock.release()

    return app
