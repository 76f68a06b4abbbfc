"""Operator interface: config parsing, CLI behaviour, and the analyst API."""

import json
import threading

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from piphunter.classify import TrainConfig
from piphunter.hunt import Keyword, KeywordSet
from piphunter.interface import (
    ApiState,
    PipelineConfig,
    create_api,
    main,
    parse_config,
)
from piphunter.osnsim import CampaignSpec, SimManifest
from piphunter.store import LabelRecord, Post, Store


class TestConfig:
    def test_defaults_valid(self):
        config = PipelineConfig()
        config.validate()
        assert config.rcp_threshold == 0.01
        assert config.keyword_budget == 60_000
        assert config.timeline_limit == 100

    def test_parse_round_trip(self):
        config = PipelineConfig(store_dir="/tmp/x", rcp_threshold=0.02, epochs=7)
        assert parse_config(config.to_text()) == config

    def test_comments_and_blanks_ignored(self):
        config = parse_config("# header\n\nepochs = 3  # inline\n")
        assert config.epochs == 3

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config key"):
            parse_config("no_such_key = 1\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(ValueError, match="key = value"):
            parse_config("just words\n")

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            parse_config("rcp_threshold = 2.0\n").validate()


@pytest.fixture()
def cli_env(tmp_path):
    manifest = SimManifest(
        seed=21,
        campaigns=[
            CampaignSpec(
                category="Gambling", language="en", n_accounts=2, n_posts=40,
                hashtags=["spintowin", "luckybet"],
                contacts=[("Telegram", "tg_lucky1"), ("WeChat", "wxlucky1")],
            ),
        ],
        n_benign=30,
    )
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(manifest.to_json(), encoding="utf-8")
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("hashtag:spintowin\n", encoding="utf-8")
    config = tmp_path / "pipeline.cfg"
    config.write_text(
        f"store_dir = {tmp_path / 'store'}\n"
        f"manifest = {manifest_path}\n"
        "epochs = 25\n",
        encoding="utf-8",
    )
    return {"config": str(config), "seeds": str(seeds), "root": tmp_path}


def _run(args):
    return CliRunner().invoke(main, args)


class TestCli:
    def test_unknown_command_exits_2(self):
        assert _run(["definitely-not-a-command"]).exit_code == 2

    def test_unknown_flag_exits_2(self):
        assert _run(["hunt", "--bogus"]).exit_code == 2

    def test_dry_run_writes_nothing(self, cli_env):
        result = _run(["--config", cli_env["config"], "--dry-run", "hunt", "--rounds", "2"])
        assert result.exit_code == 0
        assert json.loads(result.output)["dry_run"] is True
        assert not (cli_env["root"] / "store" / "journal.jsonl").exists()

    def test_hunt_emits_round_reports(self, cli_env):
        result = _run(
            ["--config", cli_env["config"], "hunt", "--rounds", "3",
             "--seeds", cli_env["seeds"]]
        )
        assert result.exit_code == 0, result.output
        reports = [json.loads(line) for line in result.output.splitlines()]
        assert [r["round_id"] for r in reports] == [1, 2, 3]

    def test_eval_reports_metrics(self, cli_env):
        result = _run(["--config", cli_env["config"], "eval", "--kfold", "3"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["mode"] == "binary" and 0.0 <= report["precision"] <= 1.0

    def test_report_categories_csv(self, cli_env):
        result = _run(["--config", cli_env["config"], "report", "--table", "categories"])
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0] == "category,count,share"
        cat, count, share = lines[1].split(",")
        assert cat == "Gambling" and count == "40" and float(share) == 1.0

    def test_report_evasion_csv_shape(self, cli_env):
        result = _run(["--config", cli_env["config"], "report", "--table", "evasion"])
        assert result.exit_code == 0, result.output
        header = result.output.splitlines()[0].split(",")
        assert header[:4] == ["cohort", "window_start", "window_end", "n_posts"]
        assert header[4:] == ["rv_1", "rv_2", "rv_3", "rv_4"]

    def test_missing_manifest_fails_cleanly(self, tmp_path):
        result = _run(["--store-dir", str(tmp_path), "report", "--table", "evasion"])
        assert result.exit_code == 1
        assert "InvalidManifest" in result.output

    def test_label_export_import(self, cli_env, tmp_path):
        store_dir = cli_env["root"] / "store"
        store = Store(store_dir)
        store.put_post(Post(id="p1", author_id="a1", text="x"))
        store.put_label(LabelRecord("p1", True, "Gambling", "lab1"))
        store.close()
        out = tmp_path / "labels.jsonl"
        result = _run(["--store-dir", str(store_dir), "label", "export",
                       "--out", str(out)])
        assert result.exit_code == 0
        assert json.loads(result.output)["exported"] == 1

        other = tmp_path / "other-store"
        result = _run(["--store-dir", str(other), "label", "import", "--in", str(out)])
        assert result.exit_code == 0
        assert Store(other).get("labels", "p1::lab1").category == "Gambling"


@pytest.fixture()
def api(tmp_path):
    store = Store(tmp_path / "store")
    for i in range(6):
        store.put_post(
            Post(
                id=f"p{i}", author_id=f"a{i % 2}", text=f"candidate {i}",
                label={"is_pip": True, "confidence": 0.5 + 0.07 * i,
                       "category": "Gambling"},
            )
        )
    keywords = KeywordSet()
    keywords.add(Keyword(kind="hashtag", value="bet"))
    state = ApiState(store, keywords=keywords, train_config=TrainConfig(epochs=5))
    return TestClient(create_api(state)), state


class TestApi:
    def test_queue_uncertainty_order(self, api):
        client, _ = api
        items = client.get("/queue").json()["items"]
        uncertainties = [it["uncertainty"] for it in items]
        assert uncertainties == sorted(uncertainties)
        assert items[0]["post_id"] == "p0"

    def test_queue_deterministic(self, api):
        client, _ = api
        assert client.get("/queue").json() == client.get("/queue").json()

    def test_label_submission_removes_from_queue(self, api):
        client, _ = api
        client.post("/labels", json={"target": "p0", "is_pip": True,
                                     "labeler_id": "a1"})
        ids = [it["post_id"] for it in client.get("/queue").json()["items"]]
        assert "p0" not in ids

    def test_label_idempotent_per_labeler(self, api):
        client, state = api
        body = {"target": "p0", "is_pip": True, "labeler_id": "a1"}
        client.post("/labels", json=body)
        client.post("/labels", json=body)
        assert state.store.count("labels") == 1

    def test_label_validation(self, api):
        client, _ = api
        assert client.post("/labels", json={"target": "p0"}).status_code == 400
        assert client.post(
            "/labels",
            json={"target": "p0", "is_pip": "yes", "labeler_id": "a"},
        ).status_code == 400
        assert client.post(
            "/labels", json={"target": "ghost", "is_pip": True, "labeler_id": "a"}
        ).status_code == 404

    def test_conflict_surfaces_and_resolves(self, api):
        client, _ = api
        client.post("/labels", json={"target": "p1", "is_pip": True, "labeler_id": "a1"})
        client.post("/labels", json={"target": "p1", "is_pip": False, "labeler_id": "a2"})
        conflicts = client.get("/conflicts").json()["conflicts"]
        assert len(conflicts) == 1
        assert len(conflicts[0]["labels"]) == 2
        resp = client.post(
            "/conflicts/resolve",
            json={"target": "p1", "is_pip": True, "labeler_id": "lead"},
        )
        assert resp.json()["conflicts"] == 0

    def test_agreeing_labels_no_conflict(self, api):
        client, _ = api
        for labeler in ("a1", "a2"):
            client.post("/labels", json={"target": "p2", "is_pip": True,
                                         "labeler_id": labeler})
        assert client.get("/conflicts").json()["conflicts"] == []

    def test_keyword_block_unblock(self, api):
        client, state = api
        resp = client.post("/keywords", json={"action": "block", "kind": "hashtag",
                                              "value": "bet"})
        assert resp.json()["state"] == "blocked"
        assert state.keywords.get("hashtag", "bet").state == "blocked"
        resp = client.post("/keywords", json={"action": "unblock", "kind": "hashtag",
                                              "value": "bet"})
        assert resp.json()["state"] == "active"

    def test_keyword_unknown_404(self, api):
        client, _ = api
        resp = client.post("/keywords", json={"action": "block", "kind": "hashtag",
                                              "value": "ghost"})
        assert resp.status_code == 404

    def test_retrain_requires_vocab(self, api):
        client, _ = api
        assert client.post("/retrain").status_code == 400

    def test_retrain_conflict_409(self, tmp_path, feature_space):
        vocab, _ = feature_space
        store = Store(tmp_path / "s")
        store.put_post(Post(id="p", author_id="a", text="x",
                            label={"is_pip": True, "confidence": 0.9}))
        state = ApiState(store, vocab=vocab, train_config=TrainConfig(epochs=2))
        client = TestClient(create_api(state))
        acquired = state.retrain_lock.acquire(blocking=False)
        assert acquired
        try:
            assert client.post("/retrain").status_code == 409
        finally:
            state.retrain_lock.release()

    def test_stats_agreement(self, api):
        client, _ = api
        for labeler in ("a1", "a2"):
            client.post("/labels", json={"target": "p3", "is_pip": True,
                                         "category": "Gambling",
                                         "labeler_id": labeler})
        client.post("/labels", json={"target": "p4", "is_pip": True, "labeler_id": "a1"})
        client.post("/labels", json={"target": "p4", "is_pip": False, "labeler_id": "a2"})
        stats = client.get("/stats").json()
        assert stats["labeler_agreement"] == pytest.approx(0.5)
        assert stats["n_labels"] == 4

    def test_clusters_endpoints(self, api):
        client, state = api
        state.store.put_contact(
            {"kind": "WeChat", "value": "w1", "post_id": "p0", "source": "post"}
        )
        clusters = client.get("/clusters").json()["clusters"]
        assert clusters
        detail = client.get(f"/clusters/{clusters[0]['id']}").json()
        assert detail["nodes"] and detail["id"] == clusters[0]["id"]
        assert client.get("/clusters/ghost").status_code == 404

    def test_acknowledged_label_survives_restart(self, tmp_path):
        store = Store(tmp_path / "s")
        store.put_post(Post(id="p", author_id="a", text="x",
                            label={"is_pip": True, "confidence": 0.9}))
        client = TestClient(create_api(ApiState(store)))
        resp = client.post("/labels", json={"target": "p", "is_pip": True,
                                            "labeler_id": "a1"})
        assert resp.status_code == 200
        del store, client  # simulated crash: no close()

        reopened = Store(tmp_path / "s")
        assert reopened.get("labels", "p::a1").is_pip is True
        reopened.close()
