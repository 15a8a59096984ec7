from __future__ import annotations

from model_server.model import KeywordModel


def test_source_classification():
    model = KeywordModel()
    assert model.classify_one("int x = input();") == ("source", 0.9)


def test_plain_statement_is_none():
    model = KeywordModel()
    label, score = model.classify_one("int a = 2;")
    assert label == "none"
    assert score == 0.6


def test_sink_classification():
    model = KeywordModel()
    assert model.classify_one("exec(x);")[0] == "sink"


def test_sink_outranks_source_on_ties():
    model = KeywordModel()
    assert model.classify_one("exec(input());")[0] == "sink"


def test_call_shape_required():
    model = KeywordModel()
    assert model.classify_one("int inputs = 3;")[0] == "none"
    assert model.classify_one("int execute_later = 1;")[0] == "none"


def test_argv_matches_as_word():
    model = KeywordModel()
    assert model.classify_one("int n = argv;")[0] == "source"


def test_pair_compatibility():
    model = KeywordModel()
    assert model.pair_matches("int x = input();", "exec(x);") == (True, 0.95)
    matched, score = model.pair_matches("int x = input();", "printf(x);")
    assert matched is False
    assert score < 0.5


def test_weights_in_unit_interval():
    model = KeywordModel()
    for table in (model.source_keywords, model.sink_keywords):
        assert all(0.0 <= w <= 1.0 for w in table.values())
    assert all(0.0 <= s <= 1.0 for s in model.pair_compatibility.values())


def test_determinism():
    model = KeywordModel()
    first = [model.classify_one("int x = recv();") for _ in range(3)]
    assert len(set(first)) == 1
