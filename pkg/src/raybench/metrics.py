"""Object-oriented size and structure metrics over declarative class models.

Model files are line oriented::

    # comment
    class Sphere extends Shape
    method set_position
    method hit
    attr radius
    adt Vec3

A class block runs until the next ``class`` line or end of file. ``method``
takes an optional ``abstract`` flag. Members are counted for the class that
declares them only; inherited members are not added to the child.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

METRIC_NAMES = ("DAC", "DIT", "NMO", "NOA", "NOM")

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_CLASS_RE = re.compile(rf"class\s+({_IDENT})(?:\s+extends\s+({_IDENT}))?")
_METHOD_RE = re.compile(rf"method\s+({_IDENT})(\s+abstract)?")
_MEMBER_RE = re.compile(rf"(attr|adt)\s+({_IDENT})")


class ModelError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class ClassRecord:
    name: str
    parent: Optional[str] = None
    methods: list[tuple[str, bool]] = field(default_factory=list)  # (name, is_abstract)
    attributes: list[str] = field(default_factory=list)
    adt_refs: list[str] = field(default_factory=list)

    @property
    def method_names(self) -> list[str]:
        return [m for m, _ in self.methods]


@dataclass
class ClassModel:
    classes: list[ClassRecord] = field(default_factory=list)

    def __post_init__(self):
        self._index = {c.name: c for c in self.classes}

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, name) -> bool:
        return name in self._index

    def get(self, name: str) -> ClassRecord:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no class named {name!r} in model") from None

    def ancestors(self, name: str) -> list[ClassRecord]:
        chain = []
        parent = self.get(name).parent
        while parent is not None:
            rec = self.get(parent)
            chain.append(rec)
            parent = rec.parent
        return chain


@dataclass(frozen=True)
class Stat:
    min: float
    max: float
    mean: float


@dataclass(frozen=True)
class MetricsReport:
    tc: int
    tm: int
    ta: int
    stats: dict  # metric name -> Stat, keys in METRIC_NAMES order

    def __getitem__(self, metric: str) -> Stat:
        return self.stats[metric.upper()]


def load_model(text: str) -> ClassModel:
    """Parse and validate a model file's contents."""
    classes: list[ClassRecord] = []
    lines_of: dict[str, int] = {}
    current: Optional[ClassRecord] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _CLASS_RE.fullmatch(line):
            name, parent = m.groups()
            if name in lines_of:
                raise ModelError(f"duplicate class {name!r} (first defined on line {lines_of[name]})", lineno)
            current = ClassRecord(name, parent)
            classes.append(current)
            lines_of[name] = lineno
            continue
        method = _METHOD_RE.fullmatch(line)
        member = None if method else _MEMBER_RE.fullmatch(line)
        if not (method or member):
            raise ModelError(f"malformed line: {line!r}", lineno)
        if current is None:
            raise ModelError(f"member outside any class: {line!r}", lineno)
        if m := method:
            name = m.group(1)
            if name in current.method_names:
                raise ModelError(f"duplicate method {name!r} in class {current.name!r}", lineno)
            current.methods.append((name, m.group(2) is not None))
        else:
            kind, name = member.groups()
            if kind == "adt":
                current.adt_refs.append(name)
            elif name in current.attributes:
                raise ModelError(f"duplicate attribute {name!r} in class {current.name!r}", lineno)
            else:
                current.attributes.append(name)

    for rec in classes:
        if rec.parent is not None and rec.parent not in lines_of:
            raise ModelError(f"class {rec.name!r} extends unknown class {rec.parent!r}", lines_of[rec.name])
    parents = {c.name: c.parent for c in classes}
    for rec in classes:
        seen = [rec.name]
        p = rec.parent
        while p is not None:
            if p in seen:
                cycle = " -> ".join(seen[seen.index(p):] + [p])
                raise ModelError(f"inheritance cycle: {cycle}", lines_of[rec.name])
            seen.append(p)
            p = parents[p]
    return ClassModel(classes)


def read_model(path) -> ClassModel:
    return load_model(Path(path).read_text())


def size_metrics(model: ClassModel) -> tuple[int, int, int]:
    """(TC, TM, TA): total classes, methods and attributes."""
    return (len(model.classes),
            sum(len(c.methods) for c in model.classes),
            sum(len(c.attributes) for c in model.classes))


def dit(model: ClassModel, name: str) -> int:
    return len(model.ancestors(name))


def nmo(model: ClassModel, name: str) -> int:
    """Methods of ``name`` whose name is also declared by some ancestor."""
    inherited = {m for a in model.ancestors(name) for m in a.method_names}
    return sum(1 for m in model.get(name).method_names if m in inherited)


def noa(model: ClassModel, name: str) -> int:
    return len(model.get(name).attributes)


def nom(model: ClassModel, name: str) -> int:
    return len(model.get(name).methods)


def dac(model: ClassModel, name: str) -> int:
    return len(set(model.get(name).adt_refs))


_PER_CLASS = {"DAC": dac, "DIT": dit, "NMO": nmo, "NOA": noa, "NOM": nom}


def per_class(model: ClassModel) -> dict[str, dict[str, int]]:
    """Metric values keyed by class name, then metric name."""
    return {c.name: {k: f(model, c.name) for k, f in _PER_CLASS.items()} for c in model.classes}


def summarize(model: ClassModel) -> MetricsReport:
    tc, tm, ta = size_metrics(model)
    table = per_class(model)
    stats = {}
    for metric in METRIC_NAMES:
        values = [row[metric] for row in table.values()]
        if values:
            stats[metric] = Stat(min(values), max(values), sum(values) / tc)
        else:
            stats[metric] = Stat(0, 0, 0.0)
    return MetricsReport(tc, tm, ta, stats)


def format_report(report: MetricsReport) -> str:
    """Aligned text table: size line, then Min/Max/Mean per metric."""
    lines = [f"TC {report.tc}  TM {report.tm}  TA {report.ta}",
             f"{'Metric':<7}{'Min':>6}{'Max':>6}{'Mean':>8}"]
    for metric in METRIC_NAMES:
        s = report.stats[metric]
        lines.append(f"{metric:<7}{s.min:>6}{s.max:>6}{s.mean:>8.2f}")
    return "\n".join(lines) + "\n"


def report_csv(report: MetricsReport) -> str:
    """One header line and one data row: tc, tm, ta, then min/max/mean per metric."""
    header = ["tc", "tm", "ta"]
    row = [report.tc, report.tm, report.ta]
    for metric in METRIC_NAMES:
        s = report.stats[metric]
        header += [f"{metric.lower()}_{k}" for k in ("min", "max", "mean")]
        row += [s.min, s.max, f"{s.mean:.2f}"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerow(row)
    return buf.getvalue()
