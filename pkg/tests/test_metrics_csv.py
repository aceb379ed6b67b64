import pytest

from felsim.harness.metrics import (
    METRICS_HEADER, MetricsRow, MetricsTable, SchemaError, counters_to_csv,
    metrics_to_csv, parse_metrics_csv, write_table,
)


def row(**overrides):
    base = dict(
        scenario="a-fog", run_seed=1, requester="zipf-0", request_id=0,
        content_name="/news/item000", issue_ms=100, satisfy_ms=174,
        latency_ms=74, served_by="cloud", cache_hit_node_kind="cloud",
        link_kind="ran", scheme="", epoch_candidate="",
    )
    base.update(overrides)
    return MetricsRow(**base)


def test_header_exact():
    text = metrics_to_csv([])
    assert text == ",".join(METRICS_HEADER) + "\n"


def test_latency_consistency_enforced():
    with pytest.raises(ValueError):
        row(latency_ms=10)


def test_rows_sorted_by_issue_requester_id():
    rows = [
        row(issue_ms=200, satisfy_ms=274, requester="b"),
        row(issue_ms=100, satisfy_ms=174, requester="b", request_id=1),
        row(issue_ms=100, satisfy_ms=174, requester="a"),
    ]
    text = metrics_to_csv(rows)
    lines = text.strip().split("\n")[1:]
    assert [line.split(",")[2] for line in lines] == ["a", "b", "b"]


def test_comma_in_name_gets_quoted():
    text = metrics_to_csv([row(content_name="/a,b/c")])
    assert '"/a,b/c"' in text


def test_candidate_field_quoted():
    text = metrics_to_csv([row(epoch_candidate="(1,0)")])
    assert '"(1,0)"' in text


def test_lf_line_endings():
    text = metrics_to_csv([row()])
    assert "\r" not in text


def test_roundtrip_byte_identical():
    rows = [
        row(),
        row(request_id=1, content_name="/a,b/c", epoch_candidate="(1,4)"),
        row(request_id=2, issue_ms=105, satisfy_ms=121, latency_ms=16,
            served_by="fog-0", cache_hit_node_kind="fog"),
    ]
    text = metrics_to_csv(rows)
    assert metrics_to_csv(parse_metrics_csv(text)) == text


def test_parse_reorders_columns_by_name():
    text = metrics_to_csv([row()])
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    permuted = header[::-1]
    index = [header.index(col) for col in permuted]
    shuffled = ",".join(permuted) + "\n"
    for line in lines[1:]:
        cells = line.split(",")
        shuffled += ",".join(cells[i] for i in index) + "\n"
    parsed = parse_metrics_csv(shuffled)
    assert parsed == [row()]


def test_missing_column_raises_schema_error():
    text = metrics_to_csv([row()]).replace("content_name", "name")
    with pytest.raises(SchemaError) as err:
        parse_metrics_csv(text)
    assert "content_name" in str(err.value)


def test_counters_csv_sorted_and_keyed_by_scenario_seed():
    counters = {
        ("a-fog", 2): {"pit_expiries": 1, "deliveries": 10},
        ("a-cloud", 1): {"deliveries": 5},
    }
    text = counters_to_csv(counters)
    assert text.splitlines() == [
        "scenario,run_seed,counter,value",
        "a-cloud,1,deliveries,5",
        "a-fog,2,deliveries,10",
        "a-fog,2,pit_expiries,1",
    ]


def test_write_table_emits_three_files(tmp_path):
    table = MetricsTable(rows=[row()])
    table.bump("a-fog", 1, "deliveries")
    paths = write_table(table, tmp_path)
    assert paths["metrics"].exists()
    assert paths["counters"].exists()
    assert paths["epochs"].exists()
    assert paths["metrics"].read_text().startswith("scenario,run_seed")
