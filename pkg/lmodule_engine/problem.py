"""Problem files: bracketed sections of key = value lines.

    [group]
    type = C2
    real_form = split

    [coefficient]
    lambda = 1,1

    [task]
    name = microsupport
    construction = ic
    perversity = upper

    [caps]
    weyl = 5000
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from lmodule_engine.config import Caps
from lmodule_engine.errors import ConfigError, ProblemSpecError
from lmodule_engine.graded_cat import PROFILES
from lmodule_engine.lmodule_core import CONSTRUCTIONS, IC, IGSTAR, WC

TASKS = (
    "kostant",
    "microsupport",
    "vanishing",
    "verify-lemma",
    "oracle-compare",
    "ic-purity",
    "validate",
    "build",
    "ses",
    "microtypes",
)

PERVERSITIES = ("upper", "lower")

_ALLOWED = {
    "group": {"type", "real_form", "table", "scales"},
    "coefficient": {"lambda"},
    "task": {"name", "construction", "perversity", "profile", "parabolic", "q", "grid", "input", "output"},
    "caps": {"weyl", "rank", "oracle_rank", "irrep_dim", "ce_dim"},
}

_REQUIRED = {"group": ("type",), "task": ("name",)}


@dataclass(frozen=True)
class ProblemSpec:
    cartan_type: str
    task: str
    weight: Optional[tuple[str, ...]] = None
    construction: str = IC
    variant: Optional[str] = None
    parabolic: Optional[str] = None
    q: Optional[str] = None
    grid: int = 2
    real_form: str = "split"
    table: Optional[str] = None
    scales: Optional[tuple[str, ...]] = None
    input: Optional[str] = None
    output: Optional[str] = None
    caps: dict = field(default_factory=dict)

    def resolved_caps(self, base: Caps) -> Caps:
        return base.with_overrides(self.caps) if self.caps else base


def _locate(text: str, section: Optional[str], key: Optional[str] = None) -> tuple[int, int]:
    """1-based (line, column) of a key inside a section, or of the section header."""
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        header = re.match(r"^\[([^\]]+)\]", stripped)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return n, line.index("[") + 1
            continue
        if key is not None and current == section:
            m = re.match(r"^(\s*)([^=:\s]+)\s*[=:]", line)
            if m and m.group(2).lower() == key:
                return n, len(m.group(1)) + 1
    return 0, 0


def _split_list(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.strip().strip("()[]").split(",") if part.strip())


def parse_problem(text: str) -> ProblemSpec:
    """Parse and validate problem text; errors carry line and column."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ProblemSpecError("key outside of any [section]", exc.lineno, 1)
    except configparser.DuplicateOptionError as exc:
        raise ProblemSpecError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno or 0, 1)
    except configparser.DuplicateSectionError as exc:
        raise ProblemSpecError(f"duplicate section [{exc.section}]", exc.lineno or 0, 1)
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else 0
        raise ProblemSpecError("line is not of the form key = value", lineno, 1)

    for section in parser.sections():
        if section not in _ALLOWED:
            raise ProblemSpecError(f"unknown section [{section}]", *_locate(text, section))
        for key in parser[section]:
            if key not in _ALLOWED[section]:
                raise ProblemSpecError(f"unknown key {key!r} in [{section}]", *_locate(text, section, key))
    for section, keys in _REQUIRED.items():
        if not parser.has_section(section):
            raise ProblemSpecError(f"missing section [{section}]")
        for key in keys:
            if not parser[section].get(key, "").strip():
                raise ProblemSpecError(f"missing key {key!r} in [{section}]", *_locate(text, section))

    group, task = parser["group"], parser["task"]
    name = task["name"].strip()
    if name not in TASKS:
        raise ProblemSpecError(f"unknown task {name!r}; expected one of {TASKS}", *_locate(text, "task", "name"))
    construction = task.get("construction", IC).strip()
    if construction not in CONSTRUCTIONS:
        raise ProblemSpecError(
            f"construction must be one of {CONSTRUCTIONS}", *_locate(text, "task", "construction")
        )
    variant = _variant(text, task, construction)

    weight = None
    if parser.has_section("coefficient") and parser["coefficient"].get("lambda"):
        weight = _split_list(parser["coefficient"]["lambda"])

    try:
        grid = int(task.get("grid", "2"))
    except ValueError:
        raise ProblemSpecError("grid must be an integer", *_locate(text, "task", "grid"))
    if grid < 0:
        raise ProblemSpecError("grid must be non-negative", *_locate(text, "task", "grid"))

    caps = {}
    if parser.has_section("caps"):
        caps = dict(parser["caps"])
        try:
            Caps().with_overrides(caps)
        except ConfigError as exc:
            raise ProblemSpecError(str(exc), *_locate(text, "caps"))

    real_form = group.get("real_form", "split").strip()
    if real_form not in ("split", "table"):
        raise ProblemSpecError("real_form must be 'split' or 'table'", *_locate(text, "group", "real_form"))
    if real_form == "table" and not group.get("table"):
        raise ProblemSpecError("real_form = table needs a table path", *_locate(text, "group", "real_form"))

    return ProblemSpec(
        cartan_type=group["type"].strip(),
        task=name,
        weight=weight,
        construction=construction,
        variant=variant,
        parabolic=task.get("parabolic"),
        q=task.get("q"),
        grid=grid,
        real_form=real_form,
        table=group.get("table"),
        scales=_split_list(group["scales"]) if group.get("scales") else None,
        input=task.get("input"),
        output=task.get("output"),
        caps=caps,
    )


def _variant(text: str, task, construction: str) -> Optional[str]:
    perversity, profile = task.get("perversity"), task.get("profile")
    if perversity and profile:
        raise ProblemSpecError("give either perversity or profile, not both", *_locate(text, "task", "profile"))
    if construction == WC:
        value = (profile or perversity or "upper").strip()
        if value not in PROFILES:
            raise ProblemSpecError(f"profile must be one of {PROFILES}", *_locate(text, "task", "profile"))
        return value
    if construction == IGSTAR:
        return None
    value = (perversity or profile or "upper").strip()
    if value not in PERVERSITIES:
        raise ProblemSpecError(f"perversity must be one of {PERVERSITIES}", *_locate(text, "task", "perversity"))
    return value


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemSpecError(f"cannot read {path}: {exc}")
    return parse_problem(text)


def format_problem(spec: ProblemSpec) -> str:
    """Write a problem back out; parse_problem(format_problem(s)) == s."""
    lines = ["[group]", f"type = {spec.cartan_type}", f"real_form = {spec.real_form}"]
    if spec.table:
        lines.append(f"table = {spec.table}")
    if spec.scales:
        lines.append(f"scales = {','.join(spec.scales)}")
    if spec.weight is not None:
        lines += ["", "[coefficient]", f"lambda = {','.join(spec.weight)}"]
    lines += ["", "[task]", f"name = {spec.task}", f"construction = {spec.construction}"]
    if spec.variant:
        key = "profile" if spec.construction == WC else "perversity"
        lines.append(f"{key} = {spec.variant}")
    for key in ("parabolic", "q", "input", "output"):
        value = getattr(spec, key)
        if value:
            lines.append(f"{key} = {value}")
    lines.append(f"grid = {spec.grid}")
    if spec.caps:
        lines += ["", "[caps]"] + [f"{k} = {v}" for k, v in sorted(spec.caps.items())]
    return "\n".join(lines) + "\n"
