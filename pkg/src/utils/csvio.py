"""Schema-tagged CSV reading and writing."""

from pathlib import Path
from typing import IO, Optional, Union

import pandas as pd

SCHEMA_PREFIX = "# schema: "

PathOrBuffer = Union[str, Path, IO[str]]


def _write(frame: pd.DataFrame, f: IO[str], schema: str, footer: Optional[dict]) -> None:
    f.write(f"{SCHEMA_PREFIX}{schema}\n")
    frame.to_csv(f, index=False, float_format="%.17g")
    for key, value in (footer or {}).items():
        f.write(f"# {key}: {value}\n")


def write_tagged_csv(
    frame: pd.DataFrame,
    target: PathOrBuffer,
    schema: str,
    footer: Optional[dict] = None,
) -> None:
    """Write a DataFrame as CSV headed by a schema version line.

    Footer entries are appended as `# key: value` comment lines.
    """
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            _write(frame, f, schema, footer)
    else:
        _write(frame, target, schema, footer)


def read_schema(path: str | Path) -> str | None:
    """Return the schema tag of a CSV file, or None when it has none."""
    with open(path) as f:
        first = f.readline().strip()
    if first.startswith(SCHEMA_PREFIX):
        return first[len(SCHEMA_PREFIX):]
    return None


def read_tagged_csv(path: str | Path) -> pd.DataFrame:
    """Read a CSV written by write_tagged_csv, skipping comment lines."""
    return pd.read_csv(path, comment="#")
