"""Tests for lmodule_engine.serialize."""

import json

import pytest

from lmodule_engine.errors import ChecksumError, FormatError
from lmodule_engine.lmodule_core import build_ic, build_igstar, validate
from lmodule_engine.root_data import build_root_system
from lmodule_engine.serialize import (
    FORMAT_VERSION,
    checksum,
    deserialize,
    dumps,
    loads,
    read_lmodule,
    serialize,
    write_lmodule,
)


@pytest.fixture(scope="module")
def c2_ic():
    return build_ic(build_root_system("C2"), (1, 1))


class TestRoundTrip:
    def test_module_survives(self, c2_ic):
        back = loads(dumps(c2_ic))
        assert back == c2_ic
        assert back.root_system.descriptor == "C2"
        assert validate(back).ok

    def test_file(self, c2_ic, tmp_path):
        path = write_lmodule(c2_ic, tmp_path / "ic.lmod")
        assert read_lmodule(path) == c2_ic

    def test_scales_survive(self):
        m = build_igstar(build_root_system("A1xA1", scales=[1, "3/2"]), (1, 0))
        back = loads(dumps(m))
        assert [str(s) for s in back.root_system.scales] == ["1", "3/2"]

    def test_rationals_are_strings(self, c2_ic):
        doc = serialize(c2_ic)
        assert doc["weight"] == ["1/1", "1/1"]
        assert doc["version"] == FORMAT_VERSION

    def test_output_is_canonical(self, c2_ic):
        assert dumps(c2_ic) == dumps(loads(dumps(c2_ic)))


class TestChecksum:
    def test_recorded(self, c2_ic):
        doc = serialize(c2_ic)
        body = {k: v for k, v in doc.items() if k != "checksum"}
        assert doc["checksum"] == checksum(body)

    def test_edit_detected(self, c2_ic):
        doc = serialize(c2_ic)
        doc["construction"] = "edited"
        with pytest.raises(ChecksumError):
            deserialize(doc)

    def test_lenient_load(self, c2_ic):
        doc = serialize(c2_ic)
        doc["construction"] = "edited"
        assert deserialize(doc, strict=False).construction == "edited"

    def test_sign_flip_breaks_the_axiom(self, c2_ic):
        doc = serialize(c2_ic)
        broken = 0
        for n, entry in enumerate(doc["maps"]):
            if entry["p"] != []:
                continue
            edited = json.loads(json.dumps(doc))
            for block in edited["maps"][n]["blocks"]:
                block["matrix"] = [[_negate(x) for x in row] for row in block["matrix"]]
            if not validate(deserialize(edited, strict=False)).ok:
                broken += 1
        assert broken > 0


def _negate(q: str) -> str:
    return q[1:] if q.startswith("-") else "-" + q


class TestMalformed:
    def test_not_json(self):
        with pytest.raises(FormatError):
            loads("{")

    def test_wrong_format(self):
        with pytest.raises(FormatError):
            deserialize({"format": "other"})

    def test_wrong_version(self, c2_ic):
        doc = serialize(c2_ic)
        doc["version"] = 99
        with pytest.raises(FormatError):
            deserialize(doc)

    def test_missing_field(self, c2_ic):
        doc = serialize(c2_ic)
        del doc["strata"]
        with pytest.raises(FormatError):
            deserialize(doc, strict=False)

    def test_bad_rational(self, c2_ic):
        doc = serialize(c2_ic)
        doc["objects"][0]["slots"][0]["weight"][0] = "one"
        with pytest.raises(FormatError):
            deserialize(doc, strict=False)

    def test_block_of_wrong_shape(self, c2_ic):
        doc = serialize(c2_ic)
        doc["maps"][0]["blocks"][0]["matrix"].append(["1/1"])
        with pytest.raises(FormatError):
            deserialize(doc, strict=False)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            read_lmodule(tmp_path / "nope.lmod")
