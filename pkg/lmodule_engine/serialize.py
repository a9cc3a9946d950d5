"""Canonical JSON documents for L-modules (.lmod files)."""

from __future__ import annotations

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Union

from lmodule_engine.errors import CartanTypeError, ChecksumError, FormatError, InvariantError, OrderingError
from lmodule_engine.graded_cat import GradedModule, GradedMorphism
from lmodule_engine.kostant import nilpotent_cohomology
from lmodule_engine.lmodule_core import LModule
from lmodule_engine.parabolics import parabolic
from lmodule_engine.root_data import as_weight, build_root_system

logger = logging.getLogger(__name__)

FORMAT_NAME = "lmod"
FORMAT_VERSION = 1
SUFFIX = ".lmod"


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _unq(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise FormatError(f"{s!r} is not a rational of the form p/q")


def _module_doc(module: GradedModule) -> list[dict]:
    return [
        {"weight": [_q(x) for x in mu], "degree": d, "labels": list(labels)}
        for (mu, d), labels in module.entries.items()
    ]


def _module_from_doc(rows: list) -> GradedModule:
    return GradedModule({
        (tuple(_unq(x) for x in row["weight"]), int(row["degree"])): tuple(row["labels"])
        for row in rows
    })


def _body(m: LModule) -> dict:
    rs = m.root_system
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "type": rs.descriptor,
        "scales": [_q(s) for s in rs.scales],
        "construction": m.construction,
        "variant": m.variant,
        "weight": None if m.weight is None else [_q(x) for x in m.weight],
        "strata": [sorted(p.levi) for p in m.strata],
        "objects": [
            {"levi": sorted(p.levi), "slots": _module_doc(e)}
            for p, e in m.E.items()
            if not e.is_zero
        ],
        "maps": [
            {
                "p": sorted(p.levi),
                "q": sorted(q.levi),
                "blocks": [
                    {
                        "weight": [_q(x) for x in mu],
                        "degree": d,
                        "matrix": [[_q(x) for x in row] for row in block],
                    }
                    for (mu, d), block in g.blocks.items()
                ],
            }
            for (p, q), g in m.f.items()
        ],
    }


def _canonical(body: dict) -> str:
    return json.dumps(body, sort_keys=True, separators=(",", ":"))


def checksum(body: dict) -> str:
    return hashlib.sha256(_canonical(body).encode("utf-8")).hexdigest()


def serialize(m: LModule) -> dict:
    """The document for ``m``: a JSON-ready dict with a sha256 checksum."""
    body = _body(m)
    return dict(body, checksum=checksum(body))


def dumps(m: LModule) -> str:
    return json.dumps(serialize(m), sort_keys=True, indent=2) + "\n"


def deserialize(doc: dict, strict: bool = True) -> LModule:
    """Rebuild an L-module; a checksum mismatch raises unless ``strict`` is off."""
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise FormatError("not an L-module document")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError(f"unsupported document version {doc.get('version')!r}, expected {FORMAT_VERSION}")
    body = {k: v for k, v in doc.items() if k != "checksum"}
    recorded = doc.get("checksum")
    if recorded != checksum(body):
        if strict:
            raise ChecksumError("document does not match its checksum")
        logger.warning("checksum mismatch ignored; the document was edited")
    try:
        return _from_body(body)
    except (KeyError, TypeError, ValueError, CartanTypeError, InvariantError, OrderingError) as exc:
        raise FormatError(f"malformed L-module document: {exc}")


def _from_body(body: dict) -> LModule:
    rs = build_root_system(body["type"], scales=[_unq(s) for s in body["scales"]] or None)
    strata = [parabolic(rs, levi) for levi in body["strata"]]
    objects = {parabolic(rs, o["levi"]): _module_from_doc(o["slots"]) for o in body["objects"]}
    maps = {}
    for entry in body["maps"]:
        p, q = parabolic(rs, entry["p"]), parabolic(rs, entry["q"])
        target = objects.get(p, GradedModule())
        source = nilpotent_cohomology(objects.get(q, GradedModule()), p, q)
        blocks = {
            (tuple(_unq(x) for x in b["weight"]), int(b["degree"])): tuple(
                tuple(_unq(x) for x in row) for row in b["matrix"]
            )
            for b in entry["blocks"]
        }
        maps[(p, q)] = GradedMorphism(source, target, 1, blocks)
    weight = body.get("weight")
    return LModule(
        rs,
        tuple(strata),
        objects,
        maps,
        body.get("construction", "custom"),
        None if weight is None else as_weight(_unq(x) for x in weight),
        body.get("variant"),
    )


def loads(text: str, strict: bool = True) -> LModule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}")
    return deserialize(doc, strict)


def write_lmodule(m: LModule, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(dumps(m), encoding="utf-8")
    logger.debug("wrote %s", path)
    return path


def read_lmodule(path: Union[str, Path], strict: bool = True) -> LModule:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}")
    return loads(text, strict)
