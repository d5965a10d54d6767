import json

import pandas as pd
import pytest

from core.boolfn import gen_dataset
from core.errors import DataError, ManifestMismatch
from core.schemas import PipelineSummary
from core.storage import read_csv, read_manifest, write_csv, write_manifest, write_schema


class TestManifest:
    @pytest.mark.parametrize("mode", ["linear", "table"])
    def test_write_then_read(self, tmp_path, mode):
        ds = gen_dataset(4, 8, 5, mode=mode)
        path = write_manifest(tmp_path / "m.json", ds, {"n": 4})
        loaded = read_manifest(path, expected_n=4)
        assert [e.function for e in loaded.entries] == [e.function for e in ds.entries]
        assert [e.function_class for e in loaded.entries] == [e.function_class for e in ds.entries]

    def test_class_key_and_hex(self, tmp_path):
        ds = gen_dataset(6, 4, 1)
        data = json.loads(write_manifest(tmp_path / "m.json", ds).read_text())
        entry = data["entries"][2]
        assert entry["class"] == "2:1"
        assert entry["kind"] == "linear"
        assert all(len(h) == 2 for h in entry["rows_hex"])

    def test_byte_identical(self, tmp_path):
        a = write_manifest(tmp_path / "a.json", gen_dataset(5, 10, 9), {"seed": 9})
        b = write_manifest(tmp_path / "b.json", gen_dataset(5, 10, 9), {"seed": 9})
        assert a.read_bytes() == b.read_bytes()

    def test_missing(self, tmp_path):
        with pytest.raises(DataError):
            read_manifest(tmp_path / "absent.json")

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(DataError):
            read_manifest(path)

    def test_width_mismatch(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", gen_dataset(3, 4, 0))
        with pytest.raises(ManifestMismatch):
            read_manifest(path, expected_n=6)

    def test_tampered_class(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", gen_dataset(3, 4, 0))
        data = json.loads(path.read_text())
        data["entries"][0]["class"] = "2:1"
        path.write_text(json.dumps(data))
        with pytest.raises(ManifestMismatch):
            read_manifest(path)


class TestCsv:
    def test_header_table_footer(self, tmp_path):
        frame = pd.DataFrame({"a": [1, 2], "b": [0.1, 1 / 3]})
        path = write_csv(tmp_path / "t.csv", frame, {"n": 6, "seeds": [42]}, footer={"acc": 1.0})
        lines = path.read_text().splitlines()
        assert lines[0] == "# n: 6"
        assert lines[1] == "# seeds: [42]"
        assert lines[2] == "a,b"
        assert lines[-1] == "# acc: 1.0"
        back = read_csv(path)
        assert list(back.columns) == ["a", "b"]
        assert back["b"].iloc[1] == pytest.approx(1 / 3, abs=1e-15)


class TestSchema:
    def test_summary_schema_published(self, tmp_path):
        schema = json.loads(write_schema(tmp_path / "s.json", PipelineSummary).read_text())
        assert "f1_test" in schema["properties"]
        assert "kmeans_agreement" in schema["required"]
