import json

from polyalg import ONE, FieldElem
from utils import append_debug_log, fraction_free_rank, parallel_map, work_pool_size

T = FieldElem.t(1)


def test_debug_log_disabled_without_env(monkeypatch, tmp_path):
    monkeypatch.delenv("HFK_DEBUG_LOG", raising=False)
    append_debug_log({"location": "test"})
    assert list(tmp_path.iterdir()) == []


def test_debug_log_appends_ndjson(monkeypatch, tmp_path):
    log = tmp_path / "logs" / "run.ndjson"
    monkeypatch.setenv("HFK_DEBUG_LOG", str(log))
    append_debug_log({"location": "a", "index": (0, 1)})
    append_debug_log({"location": "b", "bits": frozenset({1})})
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert [r["location"] for r in records] == ["a", "b"]
    assert records[0]["index"] == [0, 1]
    assert "timestamp" in records[1]


def test_debug_log_never_raises(monkeypatch, tmp_path, capsys):
    # a directory cannot be opened for appending
    monkeypatch.setenv("HFK_DEBUG_LOG", str(tmp_path))
    append_debug_log({"location": "x"})
    assert "[debug-log-fail]" in capsys.readouterr().out


def test_work_pool_size(monkeypatch):
    monkeypatch.delenv("HFK_THREADS", raising=False)
    assert work_pool_size() == 1
    monkeypatch.setenv("HFK_THREADS", "4")
    assert work_pool_size() == 4
    monkeypatch.setenv("HFK_THREADS", "zero")
    assert work_pool_size() == 1
    monkeypatch.setenv("HFK_THREADS", "-3")
    assert work_pool_size() == 1


def test_parallel_map_keeps_order():
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items, threads=1) == [x * x for x in items]
    assert parallel_map(lambda x: x * x, items, threads=4) == [x * x for x in items]
    assert parallel_map(str, [], threads=3) == []


def test_fraction_free_rank():
    assert fraction_free_rank([{0: ONE, 1: T}, {0: T, 1: T * T}], 2) == 1
    assert fraction_free_rank([{0: T, 1: ONE}, {0: ONE, 1: T}], 2) == 2
    assert fraction_free_rank([{0: ONE, 1: ONE}, {1: ONE, 2: ONE}, {0: ONE, 2: ONE}], 3) == 2
    # denominators are cleared row by row
    assert fraction_free_rank([{0: FieldElem.t(-1), 1: ONE}, {0: ONE, 1: T}], 2) == 1
    assert fraction_free_rank([{}, {2: T + ONE}], 3) == 1
    assert fraction_free_rank([], 4) == 0
