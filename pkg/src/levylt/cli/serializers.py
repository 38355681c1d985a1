"""
Curve files. CSV and JSON carry the same number text: every value is
formatted once with 17 significant digits and written verbatim into either
format. Files are written atomically (temporary file in the target directory,
then rename).
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import List, Literal, Tuple, Union

from levylt.core.schemas import ConfigurationError, CurveFile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_number(value: float, digits: int = 17) -> str:
    return f"{float(value):.{digits}g}"


def _formatted_rows(curve: CurveFile, digits: int) -> List[List[str]]:
    return [[format_number(v, digits) for v in row] for row in curve.rows]


def render_csv(curve: CurveFile, digits: int = 17) -> str:
    lines = [",".join(curve.columns)]
    lines.extend(",".join(row) for row in _formatted_rows(curve, digits))
    return "\n".join(lines) + "\n"


def render_json(curve: CurveFile, digits: int = 17) -> str:
    rows = ",\n    ".join("[" + ", ".join(row) + "]" for row in _formatted_rows(curve, digits))
    return (
        "{\n"
        f'  "columns": {json.dumps(curve.columns, ensure_ascii=False)},\n'
        f'  "metadata": {json.dumps(curve.metadata, ensure_ascii=False, sort_keys=True)},\n'
        f'  "rows": [\n    {rows}\n  ]\n'
        "}\n"
    )


def atomic_write(path: PathLike, text: str) -> None:
    """Writes UTF-8 text with '\\n' line endings to `path` through a rename."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", newline="\n", dir=directory, prefix=f".{target.name}.", delete=False
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, target)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {len(text)} bytes to {target}")


def write_curve(
    curve: CurveFile,
    path: PathLike,
    fmt: Literal["csv", "json"] = "csv",
    digits: int = 17,
) -> None:
    text = render_csv(curve, digits) if fmt == "csv" else render_json(curve, digits)
    atomic_write(path, text)


def read_curve(path: PathLike) -> Tuple[List[str], List[List[str]]]:
    """Header and number text of a CSV or JSON curve file, without float conversion."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        columns = json.loads(text)["columns"]
        start = text.index('"rows": [') + len('"rows": [')
        body = text[start:text.rindex("]")]
        rows = [
            [token.strip() for token in line.strip().rstrip(",").strip("[]").split(",")]
            for line in body.splitlines() if line.strip()
        ]
        return columns, rows
    lines = text.splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def companion_path(path: PathLike, suffix: str) -> Path:
    """`out.csv` → `out.<suffix>.csv`."""
    target = Path(path)
    return target.with_name(f"{target.stem}.{suffix}{target.suffix}")


def write_svg(curve: CurveFile, path: PathLike, x_column: int = 0, title: str = "") -> None:
    """
    Line chart of every other column against `x_column`, rendered by
    matplotlib's Agg backend (optional `plot` extra).
    """
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as e:
        raise ConfigurationError(
            "--svg needs matplotlib; install the 'plot' extra", "write_svg"
        ) from e

    figure, axes = plt.subplots(figsize=(6.0, 4.0))
    x = curve.rows[:, x_column]
    for index, name in enumerate(curve.columns):
        if index != x_column:
            axes.plot(x, curve.rows[:, index], label=name, linewidth=1.2)
    axes.set_xlabel(curve.columns[x_column])
    if title:
        axes.set_title(title)
    if len(curve.columns) > 2:
        axes.legend(frameon=False)
    figure.tight_layout()
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    figure.savefig(target, format="svg")
    plt.close(figure)
    logger.info(f"Wrote SVG chart to {target}")
