"""Result tables with provenance."""

from __future__ import annotations

import io
import json
import os

import pandas as pd

import audeer


FORMATS = ["csv", "json"]
r"""Table file formats."""


def format_table(
    table: pd.DataFrame,
    config: dict,
    *,
    format: str = "csv",
) -> str:
    r"""Render a table with tool version, seed and config.

    CSV output starts with comment lines
    holding the version, the seed and the config as JSON,
    followed by the table with a header row.
    JSON output is an object
    with the keys ``"version"``, ``"config"`` and ``"rows"``.
    No timestamps are written,
    so equal tables and configs render identically.

    Args:
        table: result table
        config: experiment config,
            its ``"seed"`` entry is echoed separately
        format: see :data:`FORMATS`

    Returns:
        rendered table

    Raises:
        ValueError: if ``format`` is not supported

    Examples:
        >>> table = pd.DataFrame({"n": [3], "i": [2]})
        >>> text = format_table(table, {"seed": 1}, format="csv")
        >>> print(text, end="")  # doctest: +ELLIPSIS
        # qpolar ...
        # seed: 1
        # config: {"seed": 1}
        n,i
        3,2

    """
    config_json = json.dumps(config, sort_keys=True)
    if format == "csv":
        buffer = io.StringIO()
        buffer.write(f"# qpolar {_version()}\n")
        buffer.write(f"# seed: {config.get('seed')}\n")
        buffer.write(f"# config: {config_json}\n")
        table.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()
    if format == "json":
        rows = json.loads(table.to_json(orient="records", double_precision=15))
        document = {
            "version": _version(),
            "config": json.loads(config_json),
            "rows": rows,
        }
        return json.dumps(document, indent=2) + "\n"
    raise ValueError(f"'format' has to be one of {FORMATS}, not '{format}'.")


def read_table(path: str) -> tuple[pd.DataFrame, dict]:
    r"""Read a table written by :func:`write_table`.

    Args:
        path: path to CSV or JSON file

    Returns:
        table and config

    Raises:
        FileNotFoundError: if ``path`` does not exist

    """
    path = audeer.path(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    if audeer.file_extension(path) == "json":
        with open(path) as fp:
            document = json.load(fp)
        return pd.DataFrame(document["rows"]), document["config"]
    config = {}
    with open(path) as fp:
        for line in fp:
            if not line.startswith("#"):
                break
            if line.startswith("# config: "):
                config = json.loads(line[len("# config: ") :])
    return pd.read_csv(path, comment="#"), config


def write_table(
    table: pd.DataFrame,
    path: str,
    config: dict,
    *,
    format: str = None,
) -> str:
    r"""Write a table with provenance header.

    Missing folders are created.

    Args:
        table: result table
        path: output file
        config: experiment config
        format: see :data:`FORMATS`,
            default is the file extension of ``path``
            or ``"csv"``

    Returns:
        absolute path of written file

    Raises:
        ValueError: if ``format`` is not supported

    """
    path = audeer.path(path)
    if format is None:
        extension = audeer.file_extension(path)
        format = extension if extension in FORMATS else "csv"
    content = format_table(table, config, format=format)
    audeer.mkdir(os.path.dirname(path))
    with open(path, "w", newline="") as fp:
        fp.write(content)
    return path


def _version() -> str:
    import qpolar

    return getattr(qpolar, "__version__", "unknown")
