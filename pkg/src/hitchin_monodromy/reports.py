"""Check reports and the emitters shared by every subcommand."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

FORMAT_TAG = "hitchin-monodromy/1"


@dataclass
class CheckItem:
    check_id: str
    passed: bool
    expected: Any = None
    observed: Any = None
    detail: str = ""
    elapsed_ms: float | None = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass
class ValidationReport:
    """Pass/fail entries; failures are data, never exceptions."""

    title: str
    items: list[CheckItem] = field(default_factory=list)

    def add(self, check_id, passed, expected=None, observed=None, detail="") -> CheckItem:
        item = CheckItem(check_id, bool(passed), expected, observed, detail)
        self.items.append(item)
        return item

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for it in other.items:
            self.items.append(CheckItem(prefix + it.check_id, it.passed, it.expected,
                                        it.observed, it.detail, it.elapsed_ms))

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    def failures(self) -> list[CheckItem]:
        return [it for it in self.items if not it.passed]

    def get(self, check_id: str) -> CheckItem:
        for it in self.items:
            if it.check_id == check_id:
                return it
        raise KeyError(check_id)

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class SuiteResult(ValidationReport):
    @property
    def overall(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for it in self.items:
            row = {"check": it.check_id, "status": it.status,
                   "expected": _plain(it.expected), "observed": _plain(it.observed)}
            if it.detail:
                row["detail"] = it.detail
            if timings:
                row["elapsed_ms"] = None if it.elapsed_ms is None else round(it.elapsed_ms, 3)
            rows.append(row)
        return {"format": FORMAT_TAG, "kind": "suite", "suite": self.title,
                "overall": self.overall, "items": rows}


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if hasattr(v, "item") and callable(v.item):
        return v.item()
    return v


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _flatten(payload: dict, prefix: str = "") -> list[tuple[str, Any]]:
    out = []
    for k, v in payload.items():
        key = prefix + str(k)
        if isinstance(v, dict):
            out.extend(_flatten(v, key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, x in enumerate(v):
                out.extend(_flatten(x, "%s[%d]." % (key, i)))
        else:
            out.append((key, json.dumps(v) if isinstance(v, (list, dict)) else v))
    return out


def render(payload: dict, fmt: str) -> str:
    """Render a report payload as json, csv or text.

    Suite payloads become one CSV row per check item; anything else is
    flattened into key/value rows.
    """
    if fmt == "json":
        return dumps_json(payload)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if payload.get("kind") == "suite":
            cols = ["check", "status", "expected", "observed"]
            if any("elapsed_ms" in r for r in payload["items"]):
                cols.append("elapsed_ms")
            w.writerow(cols)
            for r in payload["items"]:
                w.writerow([_cell(r.get(c)) for c in cols])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(payload):
                w.writerow([k, _cell(v)])
        return buf.getvalue()
    if fmt == "text":
        lines = []
        if payload.get("kind") == "suite":
            lines.append("suite %s: %s" % (payload["suite"], payload["overall"].upper()))
            for r in payload["items"]:
                extra = " (%.1f ms)" % r["elapsed_ms"] if r.get("elapsed_ms") is not None else ""
                lines.append("  [%s] %-48s expected=%s observed=%s%s" % (
                    r["status"].upper(), r["check"], _cell(r["expected"]), _cell(r["observed"]), extra))
        else:
            for k, v in _flatten(payload):
                lines.append("%s: %s" % (k, v))
        return "\n".join(lines) + "\n"
    raise ValueError("unknown format %r" % fmt)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def emit(payload: dict, fmt: str = "json", path: str | Path | None = None, stream=None) -> str:
    text = render(payload, fmt)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    elif stream is not None:
        stream.write(text)
    return text
