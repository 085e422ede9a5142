import pytest

from cocitemap.ingest import records_to_field_tagged
from cocitemap.pipeline import PipelineConfig, run_pipeline
from cocitemap.synthetic import synthetic_citation_corpus


@pytest.fixture(scope="session")
def citation_corpus():
    return synthetic_citation_corpus()


@pytest.fixture(scope="session")
def corpus_file(tmp_path_factory, citation_corpus):
    path = tmp_path_factory.mktemp("corpus") / "corpus.txt"
    path.write_text(records_to_field_tagged(citation_corpus), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def pipeline_config(corpus_file):
    return PipelineConfig(
        input_path=str(corpus_file), from_year=2000, to_year=2005, top_n=30, seed=42
    )


@pytest.fixture(scope="session")
def built_snapshot(pipeline_config):
    return run_pipeline(pipeline_config)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            when = getattr(report, "when", "call")
            if when == "call" or name not in outcomes:
                outcomes[name] = status
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(outcomes):
            label = "PASS" if outcomes[name] == "passed" else "FAIL"
            terminalreporter.write_line(f"[{label}] {name}")
