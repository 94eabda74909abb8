"""Run manifests: digests and JSON shape."""

import json

from sglab.manifest import RunManifest, sha256_file, write_manifest


def test_sha256_known_vector(tmp_path):
    path = tmp_path / "abc.txt"
    path.write_bytes(b"abc")
    assert sha256_file(path) == (
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")


def test_manifest_roundtrip(tmp_path):
    manifest = RunManifest(
        command="count",
        config={"radius": 2, "max_bytes": None},
        input_digests={"corpus.txt": "00" * 32},
        seed=None,
        artifacts=["pairs.tsv"],
        duration_seconds=0.25,
    )
    path = write_manifest(manifest, tmp_path / "pairs.tsv.manifest.json")
    doc = json.loads(path.read_text())
    assert doc["command"] == "count"
    assert doc["config"] == {"radius": 2, "max_bytes": None}
    assert doc["artifacts"] == ["pairs.tsv"]
    assert list(doc) == sorted(doc)
