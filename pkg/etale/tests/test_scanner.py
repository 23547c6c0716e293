import io
import json

import pytest

import result_cache
from config import SolverConfig
from errors import UsageError
from result_cache import cache_key, get_cache_stats, get_cached_record, update_cache
from scanner import parse_disc_range, scan, write_jsonl


@pytest.fixture
def cfg(tmp_path):
    return SolverConfig(str(tmp_path / "missing.json"))


class TestConfig:
    def test_defaults(self, cfg):
        assert cfg.seed == 0
        assert cfg.get("scan", "n") == 2
        assert cfg.generator_multipliers[0] == pytest.approx(1.0001)

    def test_file_merge(self, tmp_path):
        path = tmp_path / "etale.json"
        path.write_text(json.dumps({"witness": {"seed": 9}}))
        cfg = SolverConfig(str(path))
        assert cfg.seed == 9
        assert cfg.get("witness", "resolvent_retries") == 64

    def test_copy_with(self, cfg):
        clone = cfg.copy_with({"scan": {"workers": 3}})
        assert clone.get("scan", "workers") == 3
        assert cfg.get("scan", "workers") == 1

    def test_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ETALE_SEED", "42")
        assert SolverConfig(str(tmp_path / "none.json")).seed == 42

    def test_save_and_reload(self, tmp_path, cfg):
        path = str(tmp_path / "saved.json")
        cfg.update({"witness": {"seed": 5}})
        cfg.save_config(path)
        assert SolverConfig(path).seed == 5


class TestResultCache:
    def test_key_is_stable(self):
        a = cache_key("x^2+5", 2, ["-1", "0"], 0, "1.0")
        assert a == cache_key("x^2+5", 2, ["-1", "0"], 0, "1.0")
        assert a != cache_key("x^2+5", 2, ["-1", "0"], 1, "1.0")

    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "cache.jsonl")
        assert get_cached_record(path, "k") is None
        assert update_cache(path, "k", {"vanishes": True})
        assert get_cached_record(path, "k") == {"vanishes": True}
        assert get_cache_stats(path)["vanishing"] == 1

    def test_disabled(self):
        assert get_cached_record(None, "k") is None
        assert not update_cache(None, "k", {})

    def test_malformed_lines_are_skipped(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        path.write_text('not json\n{"key": "k", "record": {"error": "SearchExhausted"}}\n')
        stats = get_cache_stats(str(path))
        assert stats["records"] == 1 and stats["errors"] == 1

    def test_lookups_parse_the_file_once(self, tmp_path, monkeypatch):
        path = str(tmp_path / "cache.jsonl")
        update_cache(path, "a", {"vanishes": True})
        update_cache(path, "b", {"vanishes": False})
        loads = []
        real_load = result_cache._load
        monkeypatch.setattr(result_cache, "_load", lambda p: loads.append(p) or real_load(p))

        for _ in range(5):
            assert get_cached_record(path, "a") == {"vanishes": True}
        assert update_cache(path, "c", {"error": "SearchExhausted"})
        assert get_cached_record(path, "c") == {"error": "SearchExhausted"}
        assert get_cache_stats(path)["records"] == 3
        assert loads == [path]

    def test_outside_appends_are_seen(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        update_cache(str(path), "a", {"vanishes": True})
        assert get_cached_record(str(path), "b") is None
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps({"key": "b", "record": {"vanishes": False}}) + "\n")
        assert get_cached_record(str(path), "b") == {"vanishes": False}


class TestScanner:
    @pytest.mark.parametrize("text,expected", [("-20..-3", (-20, -3)), ("-3..-20", (-20, -3))])
    def test_parse_range(self, text, expected):
        assert parse_disc_range(text) == expected

    def test_parse_range_errors(self):
        with pytest.raises(UsageError):
            parse_disc_range("-20")
        with pytest.raises(UsageError):
            parse_disc_range("a..b")

    def test_empty_range(self, cfg):
        assert list(scan((-2, -1), 2, None, cfg)) == []

    def test_scan_sqrt_m20_with_cache(self, tmp_path, cfg):
        path = str(tmp_path / "cache.jsonl")
        records = list(scan((-20, -20), 2, path, cfg))
        assert [r["v"] for r in records] == [["-1", "0"], ["5", "0"]]
        assert all(r["vanishes"] is True and r["discriminant"] == "-20" for r in records)
        assert all("timing" not in r for r in records)
        assert get_cache_stats(path)["records"] == 2

        again = list(scan((-20, -20), 2, path, cfg))
        assert again == records
        assert get_cache_stats(path)["records"] == 2

    def test_write_jsonl(self):
        out = io.StringIO()
        assert write_jsonl(iter([{"b": 1, "a": 2}]), out) == 1
        assert out.getvalue() == '{"a": 2, "b": 1}\n'
