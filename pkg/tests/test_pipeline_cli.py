import json
import threading
import urllib.request

import pytest

from cocitemap.cli import main
from cocitemap.ingest import records_to_lines
from cocitemap.network import ConfigError
from cocitemap.pipeline import (
    MODE_TERMS,
    MODE_TERMS_PER_SLICE,
    PipelineConfig,
    PipelineStageError,
    run_pipeline,
)
from cocitemap.server import make_server
from cocitemap.snapshot import dumps_snapshot
from cocitemap.synthetic import TOPIC_PHRASES, synthetic_award_corpus


class TestRunPipeline:
    def test_planted_topics_recovered(self, built_snapshot):
        assert built_snapshot.partition.k == 3
        top_llr = {
            built_snapshot.labels[cid]["llr"][0].term for cid in built_snapshot.labels
        }
        assert top_llr == set(TOPIC_PHRASES)

    def test_determinism_byte_identical(self, pipeline_config, built_snapshot):
        again = run_pipeline(pipeline_config)
        assert dumps_snapshot(again) == dumps_snapshot(built_snapshot)

    def test_stage_error_carries_stage_name(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("TI only a title\n!malformed\nER\nEF\n")
        cfg = PipelineConfig(input_path=str(bad), from_year=2000, to_year=2001)
        with pytest.raises(PipelineStageError) as err:
            run_pipeline(cfg)
        assert err.value.stage == "ingest"

    def test_empty_network_reported(self, tmp_path):
        lonely = tmp_path / "lonely.txt"
        lonely.write_text("UT r1\nTI some title\nPY 2000\nCR ONLYREF\nER\nEF\n")
        cfg = PipelineConfig(input_path=str(lonely), from_year=2000, to_year=2000)
        with pytest.raises(PipelineStageError, match="empty network"):
            run_pipeline(cfg)

    def test_interval_validation(self):
        with pytest.raises(ConfigError):
            PipelineConfig(input_path="x", from_year=2005, to_year=2000)

    def test_term_mode_over_award_corpus(self, tmp_path):
        records = synthetic_award_corpus()
        path = tmp_path / "awards.jsonl"
        path.write_text(records_to_lines(records), encoding="utf-8")
        cfg = PipelineConfig(
            input_path=str(path),
            input_format="lines",
            from_year=2000,
            to_year=2009,
            top_n=30,
            mode=MODE_TERMS_PER_SLICE,
            seed=5,
        )
        snap = run_pipeline(cfg)
        # node count equals the number of distinct top-30-per-slice terms,
        # recomputed here independently from the raw records
        from collections import Counter

        from cocitemap.ingest import extract_noun_phrases

        distinct = set()
        for year in range(2000, 2010):
            freq = Counter()
            for rec in records:
                if rec.year == year:
                    freq.update({p.surface for p in extract_noun_phrases(rec.title)})
            ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:30]
            distinct.update(term for term, _ in ranked)
        assert set(snap.network.node_keys) == distinct
        assert snap.partition.k >= 2

    def test_global_term_mode(self, tmp_path):
        records = synthetic_award_corpus()
        path = tmp_path / "awards.jsonl"
        path.write_text(records_to_lines(records), encoding="utf-8")
        cfg = PipelineConfig(
            input_path=str(path),
            input_format="lines",
            from_year=2000,
            to_year=2009,
            top_n=10,
            mode=MODE_TERMS,
            seed=5,
        )
        snap = run_pipeline(cfg)
        from collections import Counter

        from cocitemap.ingest import extract_noun_phrases

        freq = Counter()
        for rec in records:
            freq.update({p.surface for p in extract_noun_phrases(rec.title)})
        expected = {t for t, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:10]}
        assert set(snap.network.node_keys) == expected
        # labels for term clusters come from phrase-membership citer sets
        assert any(snap.representative_citers[cid] for cid in snap.representative_citers)


class TestCli:
    def build_args(self, corpus_file, out):
        return [
            "build",
            "--input",
            str(corpus_file),
            "--format",
            "wos",
            "--from",
            "2000",
            "--to",
            "2005",
            "--slice-years",
            "1",
            "--top-n",
            "30",
            "--seed",
            "42",
            "--out",
            str(out),
            "--quiet",
        ]

    def test_build_validate_labels(self, corpus_file, tmp_path, capsys):
        out = tmp_path / "snapshot.json"
        assert main(self.build_args(corpus_file, out)) == 0
        assert out.exists()
        assert main(["validate", str(out)]) == 0
        assert main(["labels", str(out), "--cluster", "0"]) == 0
        printed = capsys.readouterr().out
        assert "tf*idf" in printed
        assert "log-likelihood" in printed
        assert "lsa dim 1" in printed
        assert "most representative citers" in printed

    def test_build_twice_byte_identical(self, corpus_file, tmp_path):
        out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
        assert main(self.build_args(corpus_file, out1)) == 0
        assert main(self.build_args(corpus_file, out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_labels_output_matches_snapshot(self, corpus_file, tmp_path, capsys):
        out = tmp_path / "snapshot.json"
        main(self.build_args(corpus_file, out))
        capsys.readouterr()
        main(["labels", str(out), "--cluster", "1"])
        printed = capsys.readouterr().out
        doc = json.loads(out.read_text())
        top_llr = doc["labels"]["1"]["llr"][0]["term"]
        assert top_llr in printed

    def test_missing_cluster_exit_code(self, corpus_file, tmp_path):
        out = tmp_path / "snapshot.json"
        main(self.build_args(corpus_file, out))
        assert main(["labels", str(out), "--cluster", "99"]) == 1

    def test_validate_broken_snapshot_exit_one(self, corpus_file, tmp_path):
        out = tmp_path / "snapshot.json"
        main(self.build_args(corpus_file, out))
        doc = json.loads(out.read_text())
        doc["nodes"] = doc["nodes"][1:]
        out.write_text(json.dumps(doc))
        assert main(["validate", str(out)]) == 1

    def test_missing_input_exit_two(self, tmp_path):
        args = self.build_args(tmp_path / "nope.txt", tmp_path / "out.json")
        assert main(args) == 2

    def test_malformed_corpus_exit_three(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("TI t\n!x\nER\n")
        assert main(self.build_args(bad, tmp_path / "out.json")) == 3

    def test_bad_k_flag_exit_one(self, corpus_file, tmp_path):
        args = self.build_args(corpus_file, tmp_path / "out.json")
        args += ["--k", "many"]
        assert main(args) == 1

    def test_fixed_k_flag(self, corpus_file, tmp_path):
        out = tmp_path / "snapshot.json"
        args = self.build_args(corpus_file, out) + ["--k", "3"]
        assert main(args) == 0
        doc = json.loads(out.read_text())
        assert doc["partition"]["k"] == 3

    def test_config_file_merges_with_flags(self, corpus_file, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({"label_top_n": 7, "hull_padding": 10.0}))
        out = tmp_path / "snapshot.json"
        args = self.build_args(corpus_file, out) + ["--config", str(cfg_path)]
        assert main(args) == 0
        doc = json.loads(out.read_text())
        assert doc["config"]["hull_padding"] == 10.0

    def test_unknown_config_key_exit_one(self, corpus_file, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({"not_a_key": 1}))
        out = tmp_path / "snapshot.json"
        args = self.build_args(corpus_file, out) + ["--config", str(cfg_path)]
        assert main(args) == 1


@pytest.fixture(scope="module")
def snapshot_file(tmp_path_factory, pipeline_config, built_snapshot):
    from cocitemap.snapshot import write_snapshot

    path = tmp_path_factory.mktemp("snap") / "snapshot.json"
    write_snapshot(built_snapshot, str(path))
    return path


class TestServer:
    @pytest.fixture()
    def server(self, snapshot_file):
        srv = make_server(str(snapshot_file), port=0)
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        yield srv
        srv.shutdown()
        srv.server_close()

    def _get(self, server, path):
        port = server.server_address[1]
        try:
            with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
                return resp.status, resp.read()
        except urllib.error.HTTPError as err:
            return err.code, err.read()

    def test_health(self, server):
        status, body = self._get(server, "/api/health")
        assert status == 200
        doc = json.loads(body)
        assert doc["status"] == "ok"
        assert doc["schema_version"] == "1"

    def test_snapshot_byte_identical(self, server, snapshot_file):
        status, body = self._get(server, "/api/snapshot")
        assert status == 200
        assert body == snapshot_file.read_bytes()

    def test_unknown_path_404(self, server):
        status, _ = self._get(server, "/nope")
        assert status == 404

    def test_mutation_rejected(self, server):
        port = server.server_address[1]
        req = urllib.request.Request(
            f"http://127.0.0.1:{port}/api/snapshot", data=b"x", method="POST"
        )
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(req)
        assert err.value.code == 405

    def test_invalid_snapshot_refused(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": "1"}')
        from cocitemap.server import SnapshotValidationError

        with pytest.raises(SnapshotValidationError):
            make_server(str(bad), port=0)


class TestPipelineFuzz:
    """Every emitted snapshot validates clean, over random corpora/configs."""

    def _random_corpus(self, rng, n_records):
        from cocitemap.ingest import BibRecord

        pool = [f"P{i}" for i in range(int(rng.integers(6, 20)))]
        words = ["galaxy", "survey", "quasar", "lensing", "redshift", "dwarf", "matter"]
        records = []
        for i in range(n_records):
            n_refs = int(rng.integers(2, min(6, len(pool) + 1)))
            refs = sorted(str(r) for r in rng.choice(pool, size=n_refs, replace=False))
            title_words = [str(w) for w in rng.choice(words, size=3, replace=False)]
            records.append(
                BibRecord(
                    id=f"r{i:03d}",
                    year=int(rng.integers(2000, 2006)),
                    title=f"{title_words[0]} {title_words[1]} of the {title_words[2]}",
                    cited_refs=tuple(refs),
                    times_cited=int(rng.integers(0, 40)),
                )
            )
        return records

    def test_validate_passes_on_every_emitted_snapshot(self, tmp_path):
        import numpy as np

        from cocitemap.ingest import records_to_field_tagged
        from cocitemap.snapshot import snapshot_to_document, validate_document

        rng = np.random.default_rng(97)
        for trial in range(8):
            records = self._random_corpus(rng, int(rng.integers(10, 40)))
            path = tmp_path / f"corpus{trial}.txt"
            path.write_text(records_to_field_tagged(records), encoding="utf-8")
            cfg = PipelineConfig(
                input_path=str(path),
                from_year=2000,
                to_year=2005,
                slice_years=int(rng.integers(1, 4)),
                top_n=int(rng.integers(3, 20)),
                mode="cocitation" if rng.uniform() < 0.7 else MODE_TERMS,
                weight_mode="raw" if rng.uniform() < 0.5 else "cosine",
                seed=int(rng.integers(0, 1000)),
            )
            snap = run_pipeline(cfg)
            assert validate_document(snapshot_to_document(snap)) == []
            # raw-count invariant: edge weight equals its per-slice total
            if cfg.weight_mode == "raw":
                for e in snap.network.edges:
                    assert e.weight == sum(e.per_slice_counts.values())

    def test_validate_missing_file_exit_two(self, tmp_path):
        assert main(["validate", str(tmp_path / "absent.json")]) == 2


def test_busy_port_raises_startup_error(snapshot_file):
    first = make_server(str(snapshot_file), port=0)
    port = first.server_address[1]
    try:
        with pytest.raises(OSError):
            make_server(str(snapshot_file), port=port)
    finally:
        first.server_close()


class TestServerAssets:
    def test_assets_served_with_traversal_guard(self, snapshot_file, tmp_path):
        assets = tmp_path / "assets"
        assets.mkdir()
        (assets / "index.html").write_text("<html><body>viewer</body></html>")
        (assets / "app.js").write_text("console.log('ok')")
        (tmp_path / "secret.txt").write_text("outside")
        server = make_server(str(snapshot_file), port=0, assets_dir=str(assets))
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            port = server.server_address[1]

            def get(path):
                try:
                    with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as r:
                        return r.status, r.read()
                except urllib.error.HTTPError as err:
                    return err.code, err.read()

            status, body = get("/")
            assert status == 200 and b"viewer" in body
            status, body = get("/app.js")
            assert status == 200 and b"console" in body
            status, _ = get("/../secret.txt")
            assert status == 404
            status, _ = get("/missing.css")
            assert status == 404
        finally:
            server.shutdown()
            server.server_close()
