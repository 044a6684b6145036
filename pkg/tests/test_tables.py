import json
import os

import pandas as pd
import pytest

import audeer

import qpolar


@pytest.fixture
def table():
    """Small result table."""
    return pd.DataFrame(
        {
            "n": [3, 4],
            "i": [2, 7],
            "p_e_l": [1.5e-4, 2.25e-6],
            "family": ["q1", "shor"],
        }
    )


@pytest.fixture
def config():
    """Experiment config."""
    return {"command": "construct", "seed": 3, "p_grid": [0.001]}


@pytest.mark.parametrize("format", ["csv", "json"])
def test_write_read(tmpdir, table, config, format):
    path = os.path.join(tmpdir, "sub", f"table.{format}")
    written = qpolar.write_table(table, path, config)
    assert written == audeer.path(path)
    assert os.path.exists(written)
    result, result_config = qpolar.read_table(written)
    pd.testing.assert_frame_equal(result, table)
    assert result_config == config


def test_csv_header(table, config):
    text = qpolar.core.tables.format_table(table, config)
    lines = text.splitlines()
    assert lines[0] == f"# qpolar {qpolar.__version__}"
    assert lines[1] == "# seed: 3"
    assert json.loads(lines[2][len("# config: ") :]) == config
    assert lines[3] == "n,i,p_e_l,family"
    assert text.endswith("\n")


def test_header_without_installed_version(monkeypatch, table, config):
    # Source checkouts without package metadata
    monkeypatch.delattr(qpolar, "__version__", raising=False)
    text = qpolar.core.tables.format_table(table, config)
    assert text.splitlines()[0] == "# qpolar unknown"
    document = json.loads(
        qpolar.core.tables.format_table(table, config, format="json")
    )
    assert document["version"] == "unknown"


def test_json_document(table, config):
    text = qpolar.core.tables.format_table(table, config, format="json")
    document = json.loads(text)
    assert document["version"] == qpolar.__version__
    assert document["config"] == config
    assert document["rows"][1] == {
        "n": 4,
        "i": 7,
        "p_e_l": 2.25e-6,
        "family": "shor",
    }


def test_format_is_deterministic(table, config):
    # Key order of the config does not matter
    reordered = dict(reversed(list(config.items())))
    for format in ["csv", "json"]:
        first = qpolar.core.tables.format_table(table, config, format=format)
        second = qpolar.core.tables.format_table(table, reordered, format=format)
        assert first == second


@pytest.mark.parametrize(
    "file, format, expected",
    [
        ("table.csv", None, "csv"),
        ("table.json", None, "json"),
        ("table.txt", None, "csv"),
        ("table.txt", "json", "json"),
    ],
)
def test_write_format(tmpdir, table, config, file, format, expected):
    path = qpolar.write_table(
        table,
        os.path.join(tmpdir, file),
        config,
        format=format,
    )
    with open(path) as fp:
        first = fp.read(1)
    assert first == ("#" if expected == "csv" else "{")


def test_empty_table(tmpdir, config):
    table = pd.DataFrame(columns=["n", "i"])
    path = qpolar.write_table(table, os.path.join(tmpdir, "empty.csv"), config)
    result, _ = qpolar.read_table(path)
    assert list(result.columns) == ["n", "i"]
    assert len(result) == 0


def test_errors(tmpdir, table, config):
    with pytest.raises(ValueError, match="format"):
        qpolar.core.tables.format_table(table, config, format="xlsx")
    with pytest.raises(FileNotFoundError):
        qpolar.read_table(os.path.join(tmpdir, "missing.csv"))
