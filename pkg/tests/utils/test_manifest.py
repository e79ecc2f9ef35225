import json
import os
from io import BytesIO

from freezegun import freeze_time

from SkewLab.utils.crypto import sha256
from SkewLab.utils.manifest import MANIFEST_NAME, build_manifest, dump_json, write_outputs


def test_dump_json_is_canonical():
    assert dump_json({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


@freeze_time("2026-01-02 03:04:05")
def test_build_manifest():
    manifest = build_manifest("1.0.0", {"n": 4}, 7, {"a.csv": "x", "b.csv": BytesIO(b"y")})
    assert manifest == {
        "version": "1.0.0",
        "config": {"n": 4},
        "seed": 7,
        "timestamp": "2026-01-02T03:04:05Z",
        "checksums": {"a.csv": sha256("x"), "b.csv": sha256(b"y")},
    }


def test_write_outputs(tmp_path):
    out = tmp_path / "run"
    manifest = write_outputs(
        str(out), {"trials.csv": BytesIO(b"seed\n1\n"), "matrices/0000.csv": "m"}, "1.0.0", {}, 3
    )
    assert (out / "trials.csv").read_bytes() == b"seed\n1\n"
    assert (out / "matrices" / "0000.csv").read_text() == "m"
    with open(os.path.join(str(out), MANIFEST_NAME)) as f:
        assert json.load(f) == manifest
    assert manifest["checksums"]["trials.csv"] == sha256(b"seed\n1\n")
