"""Command-line interface: ``evtcodec {gen,encode,bench}``."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from . import _backend
from .augment import RpsConfig, apply_draw, draw_sequence
from .bench import bench_corpus, replay_counts, reports_to_csv, BenchSummary, SCENARIOS
from .coo import coo_encode
from .encoders import encode
from .errors import EvtCodecError
from .events import SensorGeometry, chunk_stream
from .formats import read_events, write_coo, write_events, write_pgm, write_tensor
from .synth import PATTERNS, synth_events
from .tensor import FormatTag, count_nonzeros

FORMATS = ("vtei", "shist", "mdes", "voxel")
AUG_DEFAULTS = {"rps_s": 0.05, "rps_p": 0.5, "hflip_prob": 0.5, "zoom_prob": 0.5}


def _threads() -> int:
    cap = os.environ.get("EVTCODEC_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise EvtCodecError(f"EVTCODEC_THREADS must be an integer, got {cap!r}") from None
    return n


def _geometry(args) -> SensorGeometry:
    return SensorGeometry(args.width, args.height)


def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--width", type=int, default=304, help="sensor width for CSV inputs (default: 304)")
    p.add_argument("--height", type=int, default=240, help="sensor height for CSV inputs (default: 240)")


def _add_window(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--window-us", type=int, default=50_000)
    p.add_argument("--backend", choices=_backend.available_backends(), default=None)


def cmd_gen(args) -> int:
    stream = synth_events(
        _geometry(args),
        int(args.duration_ms * 1000),
        args.pattern,
        contrast=args.contrast,
        seed=args.seed,
        tick_us=args.tick_us,
    )
    write_events(args.output, stream, args.event_format)
    print(f"wrote {len(stream)} events to {args.output}")
    return 0


def _aug_settings(args):
    vals = {k: getattr(args, k) for k in AUG_DEFAULTS}
    if args.augment:
        vals = {k: AUG_DEFAULTS[k] if v is None else v for k, v in vals.items()}
    else:
        vals = {k: (AUG_DEFAULTS[k] if k == "rps_p" else 0.0) if v is None else v for k, v in vals.items()}
    return vals


def cmd_encode(args) -> int:
    tag = FormatTag.parse(args.format)
    if tag is FormatTag.VOXEL and args.bins < 2:
        raise EvtCodecError("voxel grid needs --bins >= 2")
    stream = read_events(args.input, geometry=_geometry(args) if _is_csv(args.input) else None)
    g = stream.geometry
    chunks = chunk_stream(stream, args.window_us, args.bins)

    aug = _aug_settings(args)
    draw = draw_sequence(
        args.seed, g.height, g.width, RpsConfig(aug["rps_s"], aug["rps_p"]), aug["hflip_prob"], aug["zoom_prob"]
    )
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)

    def work(k):
        chunk, window = chunks[k]
        try:
            tensor = apply_draw(encode(chunk, window, tag, backend=args.backend), draw)
            stem = out_dir / f"chunk_{k:05d}"
            if args.emit in ("tensor", "both"):
                write_tensor(stem.with_suffix(".etn"), tensor)
            if args.emit in ("coo", "both"):
                write_coo(stem.with_suffix(".coo"), coo_encode(tensor))
            if args.pgm:
                for c in range(tensor.dims[0]):
                    write_pgm(out_dir / f"chunk_{k:05d}_c{c:02d}.pgm", tensor, c)
        except EvtCodecError as exc:
            raise EvtCodecError(f"chunk {k}: {exc}") from exc
        return len(chunk), count_nonzeros(tensor)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(work, range(len(chunks))))
    print(f"# {tag.name} bins={args.bins} window_us={args.window_us} rps={draw.rps_branch.value} "
          f"hflip={draw.hflip} zoom={draw.zoom_scale}")
    for k, (n_ev, nz) in enumerate(results):
        print(f"chunk {k}: events={n_ev} non_zeros={nz}")
    return 0


def _is_csv(path) -> bool:
    return Path(path).suffix.lower() in (".csv", ".txt")


def _load_counts(spec: str):
    if spec == "gen1":
        text = resources.files("evtcodec").joinpath("data/gen1_reference_counts.csv").read_text()
        return list(csv.DictReader(text.splitlines()))
    with open(spec, newline="") as fh:
        return list(csv.DictReader(fh))


def cmd_bench(args) -> int:
    formats = [FormatTag.parse(f) for f in args.formats.split(",") if f.strip()]
    if args.from_counts:
        reports = replay_counts(
            _load_counts(args.from_counts), _geometry(args), args.bins, args.window_us, args.raw_event_bytes
        )
        reports = [r for r in reports if r.format_tag in formats]
        summary = BenchSummary(
            {s: [r for r in reports if r.scenario == s] for s in SCENARIOS if any(r.scenario == s for r in reports)},
            {s: next(r.events_in_chunk for r in reports if r.scenario == s) for s in SCENARIOS
             if any(r.scenario == s for r in reports)},
            0,
        )
    else:
        if not args.inputs:
            raise EvtCodecError("bench needs event files or --from-counts")
        streams = [read_events(p, geometry=_geometry(args) if _is_csv(p) else None) for p in args.inputs]
        summary = bench_corpus(
            streams, args.window_us, formats, args.reps, args.bins, args.raw_event_bytes, args.backend
        )
    text = summary.to_json() if args.report == "json" else summary.to_csv()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evtcodec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic event stream")
    g.add_argument("--pattern", choices=PATTERNS, default="moving-bar")
    g.add_argument("--duration-ms", type=float, default=500.0)
    g.add_argument("--contrast", type=float, default=0.2, help="log-intensity threshold; 'inf' yields no events")
    g.add_argument("--tick-us", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--event-format", choices=("csv", "evb"), default=None, help="default: by extension")
    g.add_argument("-o", "--output", required=True)
    _add_geometry(g)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("encode", help="encode an event file chunk by chunk")
    e.add_argument("input")
    e.add_argument("--format", choices=FORMATS, default="vtei")
    _add_window(e)
    _add_geometry(e)
    e.add_argument("--augment", action="store_true", help="enable all augmentations at their defaults")
    e.add_argument("--rps-s", dest="rps_s", type=float, default=None, help="suppression probability (default 0.05)")
    e.add_argument("--rps-p", dest="rps_p", type=float, default=None, help="P(suppress positive) (default 0.5)")
    e.add_argument("--hflip-prob", type=float, default=None)
    e.add_argument("--zoom-prob", type=float, default=None)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--emit", choices=("tensor", "coo", "both"), default="tensor")
    e.add_argument("--pgm", action="store_true", help="also write one grayscale PGM per channel")
    e.add_argument("-o", "--output", required=True, help="output directory")
    e.set_defaults(func=cmd_encode)

    b = sub.add_parser("bench", help="latency / size / bandwidth report")
    b.add_argument("inputs", nargs="*")
    b.add_argument("--formats", default=",".join(FORMATS))
    _add_window(b)
    _add_geometry(b)
    b.add_argument("--reps", type=int, default=11)
    b.add_argument("--raw-event-bytes", type=int, default=4)
    b.add_argument("--report", choices=("csv", "json"), default="csv")
    b.add_argument("--from-counts", default=None,
                   help="replay recorded counts (CSV path, or 'gen1' for the bundled reference)")
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EvtCodecError, OSError, ValueError) as exc:
        print(f"evtcodec {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
