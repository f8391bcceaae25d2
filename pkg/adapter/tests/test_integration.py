"""Optional cross-checks against an installed scenestats analysis core.

These exercise the boundary between the two packages strictly through the
published external interfaces (the interchange file and the `scenestats`
CLI). They skip when the analysis package is not installed.
"""

import json
import shutil
import subprocess
import sys

import pytest

from scene_adapter import AdapterConfig, TranscriptStore, annotate_directory, replay_backends

from conftest import build_corpus

scenestats_cli = shutil.which("scenestats")


@pytest.mark.skipif(scenestats_cli is None,
                    reason="scenestats CLI not installed")
def test_primary_cli_ingests_adapter_output(tmp_path):
    image_dir, transcript = build_corpus(tmp_path, n_images=8)
    store = TranscriptStore.load(transcript)
    out = tmp_path / "dets.ndjson"
    ok, failed = annotate_directory(image_dir, AdapterConfig(),
                                    *replay_backends(store), out_path=out)
    assert (ok, failed) == (8, 0)
    result = subprocess.run(
        [scenestats_cli, "ingest", "--format", "detections",
         "--input", str(out), "--out", str(tmp_path / "store")],
        capture_output=True, text=True, timeout=120,
    )
    assert result.returncode == 0, result.stderr
    lines = (tmp_path / "store" / "scenes.ndjson").read_text().strip().splitlines()
    assert len(lines) == 8


@pytest.mark.skipif(scenestats_cli is None,
                    reason="scenestats CLI not installed")
def test_masks_decode_bit_exactly_in_the_analysis_core(tmp_path):
    pytest.importorskip("scenestats")
    from scenestats import rle_decode

    image_dir, transcript = build_corpus(tmp_path, n_images=4)
    store = TranscriptStore.load(transcript)
    out = tmp_path / "dets.ndjson"
    annotate_directory(image_dir, AdapterConfig(), *replay_backends(store),
                       out_path=out)
    for line in out.read_text().strip().splitlines():
        record = json.loads(line)
        for det in record["detections"]:
            counts = rle_decode(det["mask"]["counts"],
                                tuple(det["mask"]["size"]))
            assert sum(counts) == record["width"] * record["height"]
