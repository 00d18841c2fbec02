"""Command-line entry point for batch extraction, evaluation, and generation.

Commands:
  extract  write one feature line per manifest entry
  loocv    leave-one-out evaluation report for one feature kind
  sweep    leave-one-out accuracy of all feature kinds across resolutions
  synth    generate the seeded synthetic benchmark (images + manifest)

Defaults reproduce the reference configuration: resolution 300x225,
strict-greater comparator, C=1.0, 100 passes, tolerance 1e-6. All
randomness flows from --seed; no command reads a clock or the environment.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .classifier import SolverConfig
from .dataset import (
    Manifest,
    ManifestError,
    SyntheticSpec,
    filter_group,
    generate_synthetic,
    load_manifest,
    serialize_manifest,
)
from .evaluation import (
    DEFAULT_RESOLUTION,
    DEFAULT_SWEEP_RESOLUTIONS,
    DatasetEntry,
    LabeledDataset,
    loocv,
    report_to_json,
    report_to_table,
    resolution_sweep,
    sweep_to_json,
    sweep_to_table,
)
from .features import Comparator, FeatureKind, extract_feature, format_feature
from .imagecore import (
    PnmDecodeError,
    Resolution,
    RgbImage,
    decode_image,
    encode_pgm,
    resize_bilinear,
    to_grayscale,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNREADABLE = 3
EXIT_INVALID_DATA = 4
EXIT_PROCESSING = 5

_EXIT_CODE_HELP = """\
exit codes:
  0  success
  2  invalid usage or flag combination
  3  unreadable input (missing file, IO failure)
  4  invalid data (malformed manifest or image)
  5  processing failure (e.g. a fold with single-class training data)
"""

_COMPARATORS = {"gt": Comparator.STRICT_GREATER, "ge": Comparator.GREATER_EQUAL}


def _resolution_list(text: str) -> list[Resolution]:
    out = []
    for token in text.split(","):
        try:
            w, h = token.lower().split("x")
            out.append(Resolution(int(w), int(h)))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"bad resolution {token!r}, expected WIDTHxHEIGHT"
            ) from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="texscreen",
        description="Texture-based adulteration screening over image manifests.",
        epilog=_EXIT_CODE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    manifest_flags = argparse.ArgumentParser(add_help=False)
    manifest_flags.add_argument("--manifest", required=True, help="manifest csv path")
    manifest_flags.add_argument(
        "--group", choices=("1", "2", "all"), default="all", help="group filter"
    )
    manifest_flags.add_argument(
        "--comparator",
        choices=sorted(_COMPARATORS),
        default="gt",
        help="neighbor-vs-center tie rule: gt (strict) or ge",
    )

    solver_flags = argparse.ArgumentParser(add_help=False)
    solver_flags.add_argument("--c", type=float, default=1.0, help="soft-margin penalty")
    solver_flags.add_argument(
        "--max-iter", type=int, default=100, help="maximum full passes over the samples"
    )
    solver_flags.add_argument(
        "--tol", type=float, default=1e-6, help="projected-gradient stopping tolerance"
    )

    output_flags = argparse.ArgumentParser(add_help=False)
    output_flags.add_argument("--out", help="output path (default: stdout)")
    output_flags.add_argument(
        "--format", choices=("json", "table"), default="json", help="report format"
    )
    output_flags.add_argument(
        "--decimal-comma",
        action="store_true",
        help="render percents with a decimal comma (96,6%%)",
    )

    p_extract = sub.add_parser(
        "extract",
        parents=[manifest_flags],
        help="write one feature line per manifest entry",
    )
    p_extract.add_argument(
        "--kind", choices=[k.value for k in FeatureKind], default="lbp"
    )
    p_extract.add_argument("--width", type=int, default=DEFAULT_RESOLUTION.width)
    p_extract.add_argument("--height", type=int, default=DEFAULT_RESOLUTION.height)
    p_extract.add_argument("--out", help="output path (default: stdout)")

    p_loocv = sub.add_parser(
        "loocv",
        parents=[manifest_flags, solver_flags, output_flags],
        help="leave-one-out evaluation at one resolution",
    )
    p_loocv.add_argument(
        "--kind", choices=[k.value for k in FeatureKind], default="lbp"
    )
    p_loocv.add_argument("--width", type=int, default=DEFAULT_RESOLUTION.width)
    p_loocv.add_argument("--height", type=int, default=DEFAULT_RESOLUTION.height)

    p_sweep = sub.add_parser(
        "sweep",
        parents=[manifest_flags, solver_flags, output_flags],
        help="accuracy of all feature kinds across resolutions",
    )
    p_sweep.add_argument(
        "--resolutions",
        type=_resolution_list,
        default=None,
        help="comma-separated WIDTHxHEIGHT list (default: the 4:3 grid 50x37..300x225)",
    )

    p_synth = sub.add_parser(
        "synth", help="generate the seeded synthetic benchmark into a directory"
    )
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--seed", type=int, default=1, help="64-bit generator seed")
    p_synth.add_argument("--per-class", type=int, default=20, help="pairs to generate")
    p_synth.add_argument("--width", type=int, default=64)
    p_synth.add_argument("--height", type=int, default=48)
    p_synth.add_argument("--smoothing-radius", type=int, default=2)

    return parser


def _read_manifest(path_text: str, group: str) -> tuple[Manifest, Path]:
    path = Path(path_text)
    manifest = load_manifest(path.read_bytes())
    if group != "all":
        manifest = filter_group(manifest, int(group))
    return manifest, path.parent


def _load_dataset(manifest: Manifest, base_dir: Path) -> LabeledDataset:
    entries = []
    for e in manifest.entries:
        image_path = Path(e.path)
        if not image_path.is_absolute():
            image_path = base_dir / image_path
        decoded = decode_image(image_path.read_bytes())
        if isinstance(decoded, RgbImage):
            decoded = to_grayscale(decoded)
        entries.append(DatasetEntry(e.sample_id, decoded, e.label, e.group))
    return LabeledDataset(tuple(entries))


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_extract(args: argparse.Namespace) -> int:
    manifest, base_dir = _read_manifest(args.manifest, args.group)
    dataset = _load_dataset(manifest, base_dir)
    target = Resolution(args.width, args.height)
    cmp = _COMPARATORS[args.comparator]
    kind = FeatureKind(args.kind)
    lines = [
        format_feature(extract_feature(resize_bilinear(e.image, target), kind, cmp))
        for e in dataset.entries
    ]
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(c=args.c, max_outer_iterations=args.max_iter, tolerance=args.tol)


def _cmd_loocv(args: argparse.Namespace) -> int:
    manifest, base_dir = _read_manifest(args.manifest, args.group)
    dataset = _load_dataset(manifest, base_dir)
    report = loocv(
        dataset,
        FeatureKind(args.kind),
        Resolution(args.width, args.height),
        _COMPARATORS[args.comparator],
        _solver_config(args),
    )
    if args.format == "json":
        text = report_to_json(report, args.decimal_comma)
    else:
        text = report_to_table(report, args.decimal_comma)
    _write_text(args.out, text)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    manifest, base_dir = _read_manifest(args.manifest, args.group)
    dataset = _load_dataset(manifest, base_dir)
    resolutions = args.resolutions if args.resolutions else DEFAULT_SWEEP_RESOLUTIONS
    report = resolution_sweep(
        dataset, resolutions, _COMPARATORS[args.comparator], _solver_config(args)
    )
    if args.format == "json":
        text = sweep_to_json(report, args.decimal_comma)
    else:
        text = sweep_to_table(report)
    _write_text(args.out, text)
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        seed=args.seed,
        per_class=args.per_class,
        width=args.width,
        height=args.height,
        smoothing_radius=args.smoothing_radius,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    images, manifest = generate_synthetic(spec)
    for image, entry in zip(images, manifest.entries):
        (out_dir / entry.path).write_bytes(encode_pgm(image))
    (out_dir / "manifest.csv").write_text(serialize_manifest(manifest), encoding="utf-8")
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "loocv": _cmd_loocv,
    "sweep": _cmd_sweep,
    "synth": _cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"texscreen: unreadable input: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except (ManifestError, PnmDecodeError) as exc:
        print(f"texscreen: invalid data: {exc}", file=sys.stderr)
        return EXIT_INVALID_DATA
    except ValueError as exc:
        print(f"texscreen: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
