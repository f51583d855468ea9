import csv
import json
import os
from typing import Any, Iterable, Sequence

from pydantic import BaseModel


def ensure_directory(directory_path: str):
    if directory_path and not os.path.exists(directory_path):
        os.makedirs(directory_path)


def read_json(filename: str) -> Any:
    with open(filename, "r", encoding="utf-8") as f:
        return json.load(f)


# writes a report as canonical JSON so equal reports are byte-identical
def write_json(filename: str, content: Any):
    ensure_directory(os.path.dirname(filename))
    if isinstance(content, BaseModel):
        content = content.model_dump(mode="json")
    with open(filename, "w", encoding="utf-8", newline="\n") as f:
        json.dump(content, f, indent=2, sort_keys=True)
        f.write("\n")


def write_csv(filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    ensure_directory(os.path.dirname(filename))
    with open(filename, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)
