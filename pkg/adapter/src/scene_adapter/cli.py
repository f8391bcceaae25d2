"""Adapter command line: annotate a directory of images.

Replay mode (the default, and the only mode exercised by tests) reads a
recorded transcript and never touches the network. Live mode requires a
configured label endpoint and integrator-supplied detector/segmenter
backends, so the CLI exposes replay only; live pipelines embed
:func:`scene_adapter.annotate.annotate_directory` directly.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backends import replay_backends
from .config import DEFAULT_PROMPT_TEMPLATE, AdapterConfig
from .errors import AdapterError
from .transcript import TranscriptStore
from .annotate import annotate_directory


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scene-adapter",
        description="Emit detection interchange records for a directory of images",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("annotate", help="replay a transcript over image files")
    p.add_argument("--images", required=True, help="directory of PNG/JPEG files")
    p.add_argument("--transcript", required=True,
                   help="recorded model-interaction transcript (ndjson)")
    p.add_argument("--out", required=True, help="interchange output file")
    p.add_argument("--failures", help="failure sidecar path "
                                      "(default: <out>.failures.ndjson)")
    p.add_argument("--retry-budget", type=int, default=2)
    p.add_argument("--score-floor", type=float, default=0.05)
    p.add_argument("--prompt-template", default=DEFAULT_PROMPT_TEMPLATE)
    p.add_argument("--code-salt", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = AdapterConfig(prompt_template=args.prompt_template,
                            retry_budget=args.retry_budget,
                            score_floor=args.score_floor)
        store = TranscriptStore.load(args.transcript)
        label_model, detector, segmenter = replay_backends(store)
        ok, failed = annotate_directory(
            Path(args.images), cfg, label_model, detector, segmenter,
            out_path=args.out, failures_path=args.failures,
            code_salt=args.code_salt,
        )
    except AdapterError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"annotated {ok} images, {failed} failures -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
