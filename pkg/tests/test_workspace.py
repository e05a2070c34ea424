import json

import numpy as np
import pytest

from fuzzyirt import ItemParams, ResponseMatrix
from fuzzyirt.workspace import (
    REPOSITORIES,
    WorkspaceLayout,
    config_hash,
    ingest_responses,
    parse_config_file,
    read_abilities,
    read_items,
    write_abilities,
    write_csv,
    write_items,
    write_responses,
    write_run_record,
    write_sidecar,
)


class TestLayout:
    """Workspace directory structure."""

    def test_ensure_creates_repositories(self, tmp_path):
        ws = WorkspaceLayout(tmp_path / "ws").ensure()
        for name in REPOSITORIES:
            assert (ws.root / name).is_dir()
        assert ws.responses.name == "responses"
        assert ws.runs.parent == ws.root

    def test_ensure_is_idempotent(self, tmp_path):
        ws = WorkspaceLayout(tmp_path / "ws")
        ws.ensure()
        ws.ensure()
        assert ws.kb.is_dir()


class TestProvenance:
    """Sidecars, run records and the config hash."""

    def test_hash_ignores_key_order(self):
        assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
        assert config_hash({"a": 1}) != config_hash({"a": 2})

    def test_sidecar_contents(self, tmp_path):
        artifact = tmp_path / "thing.csv"
        artifact.write_text("x\n")
        side = write_sidecar(artifact, "simulate", {"n": 10}, seed=3)
        assert side.name == "thing.csv.meta.json"
        meta = json.loads(side.read_text())
        assert meta["artifact"] == "thing.csv"
        assert meta["command"] == "simulate"
        assert meta["config"] == {"n": 10}
        assert meta["config_hash"] == config_hash({"n": 10})
        assert meta["seed"] == 3
        assert "created" in meta

    def test_run_record(self, tmp_path):
        ws = WorkspaceLayout(tmp_path).ensure()
        out = write_run_record(ws, "train", {"method": "pfml2"}, 0,
                               [ws.kb / "after.xml"])
        assert out.parent == ws.runs
        assert out.name.startswith("train-")
        record = json.loads(out.read_text())
        assert record["command"] == "train"
        assert record["artifacts"] == [str(ws.kb / "after.xml")]


class TestConfigFile:
    """Flat key = value config parsing."""

    def test_parses_and_strips(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\n\nseed = 7\n  students=100\n")
        assert parse_config_file(cfg) == {"seed": "7", "students": "100"}

    def test_errors_carry_line_numbers(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("seed = 7\nnonsense\n")
        with pytest.raises(ValueError, match="line 2"):
            parse_config_file(cfg)
        cfg.write_text("= 9\n")
        with pytest.raises(ValueError, match="line 1"):
            parse_config_file(cfg)


class TestResponseFiles:
    """Response CSV round trips and ingestion errors."""

    @staticmethod
    def _matrix():
        data = np.array([[1, 0, -1], [0, -1, 1]], dtype=np.int8)
        return ResponseMatrix(data, ("s1", "s2"), ("i1", "i2", "i3"))

    def test_round_trip(self, tmp_path):
        path = tmp_path / "responses.csv"
        write_responses(self._matrix(), path)
        back = ingest_responses(path)
        assert np.array_equal(back.data, self._matrix().data)
        assert back.student_ids == ("s1", "s2")
        assert back.item_ids == ("i1", "i2", "i3")

    def test_missing_cells_written_as_n(self, tmp_path):
        path = tmp_path / "responses.csv"
        write_responses(self._matrix(), path)
        text = path.read_text()
        assert "s1,1,0,N" in text

    def test_bad_cell_reports_line_and_item(self, tmp_path):
        path = tmp_path / "responses.csv"
        path.write_text("student_id,i1,i2\ns1,1,x\n")
        with pytest.raises(ValueError, match="line 2, item i2"):
            ingest_responses(path)

    def test_duplicate_student_reported(self, tmp_path):
        path = tmp_path / "responses.csv"
        path.write_text("student_id,i1\ns1,1\ns1,0\n")
        with pytest.raises(ValueError, match="line 3.*duplicate"):
            ingest_responses(path)

    def test_ragged_row_reported(self, tmp_path):
        path = tmp_path / "responses.csv"
        path.write_text("student_id,i1,i2\ns1,1\n")
        with pytest.raises(ValueError, match="line 2.*cells"):
            ingest_responses(path)

    def test_duplicate_item_header_reported(self, tmp_path):
        path = tmp_path / "responses.csv"
        path.write_text("student_id,i1,i1\ns1,1,0\n")
        with pytest.raises(ValueError, match="line 1.*duplicate item"):
            ingest_responses(path)

    def test_empty_file_reported(self, tmp_path):
        path = tmp_path / "responses.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            ingest_responses(path)


class TestParamFiles:
    """Item and ability CSV round trips."""

    def test_items_round_trip(self, tmp_path):
        items = [ItemParams(0.96, 0.59, 0.23), ItemParams(1.5, -1.0, 0.25)]
        path = write_items(items, ["i1", "i2"], tmp_path / "items.csv")
        back, ids = read_items(path)
        assert back == items
        assert ids == ["i1", "i2"]

    def test_items_full_precision(self, tmp_path):
        items = [ItemParams(2 / 3, 1 / 3, 1 / 7)]
        path = write_items(items, ["i1"], tmp_path / "items.csv")
        back, _ = read_items(path)
        assert back[0].a == items[0].a
        assert back[0].c == items[0].c

    def test_items_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            write_items([ItemParams(1, 0, 0)], ["i1", "i2"], tmp_path / "x.csv")

    def test_items_bad_row_reported(self, tmp_path):
        path = tmp_path / "items.csv"
        path.write_text("item_id,a,b,c\ni1,9.0,0.0,0.0\n")
        with pytest.raises(ValueError, match="line 2"):
            read_items(path)

    def test_items_header_checked(self, tmp_path):
        path = tmp_path / "items.csv"
        path.write_text("id,a,b,c\ni1,1,0,0\n")
        with pytest.raises(ValueError, match="header"):
            read_items(path)

    def test_abilities_round_trip(self, tmp_path):
        thetas = [-1.224744871391589, 0.0, 1.224744871391589]
        path = write_abilities(thetas, ["s1", "s2", "s3"], tmp_path / "theta.csv")
        back, ids = read_abilities(path)
        assert back == thetas
        assert ids == ["s1", "s2", "s3"]

    def test_abilities_bad_value_reported(self, tmp_path):
        path = tmp_path / "theta.csv"
        path.write_text("student_id,theta\ns1,abc\n")
        with pytest.raises(ValueError, match="line 2"):
            read_abilities(path)


class TestCurveCsv:
    """Generic CSV writer used for curve exports."""

    def test_none_becomes_empty_cell(self, tmp_path):
        path = write_csv(tmp_path / "curve.csv", ["x", "y"],
                         [(0.0, 1.0), (0.5, None)])
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y"
        assert lines[2] == "0.5,"
