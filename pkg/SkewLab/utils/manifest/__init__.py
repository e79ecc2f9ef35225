import datetime
import json
import os
from io import BytesIO

from SkewLab.utils.crypto import sha256

MANIFEST_NAME = "manifest.json"


def dump_json(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _payload(content):
    if isinstance(content, BytesIO):
        return content.getvalue()
    if isinstance(content, str):
        return content.encode("utf-8")
    return bytes(content)


def build_manifest(version, config, seed, outputs):
    """
    A record of one run: tool version, resolved config, master seed, timestamp and the
    sha256 of every output. Only the timestamp varies between identical runs.
    """
    return {
        "version": version,
        "config": config,
        "seed": seed,
        "timestamp": datetime.datetime.utcnow().isoformat() + "Z",
        "checksums": {name: sha256(_payload(content)) for name, content in outputs.items()},
    }


def write_outputs(out_dir, outputs, version, config, seed):
    """Write every output under out_dir followed by its manifest. Returns the manifest."""
    payloads = {name: _payload(content) for name, content in outputs.items()}
    for name, payload in payloads.items():
        path = os.path.join(out_dir, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "wb") as target:
            target.write(payload)

    manifest = build_manifest(version, config, seed, payloads)
    with open(os.path.join(out_dir, MANIFEST_NAME), "w") as target:
        target.write(dump_json(manifest))
    return manifest
