"""Labeled image manifests and the seeded synthetic benchmark generator.

Manifests are comma-separated text with header `id,path,label,group`, one
entry per line; labels are `normal` or `adulterated`, groups 1 or 2.

The synthetic benchmark pairs each "normal" image (seeded uniform noise,
box-blurred so neighboring pixels correlate) with an "adulterated" twin
whose pixels are the identical multiset randomly permuted in position. The
twins share their gray-level histogram exactly while the blur-induced
spatial structure is destroyed, so texture codes separate the classes and
intensity histograms cannot.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .imagecore import GrayImage

LABEL_NAMES = {-1: "normal", 1: "adulterated"}
LABEL_VALUES = {name: value for value, name in LABEL_NAMES.items()}
MANIFEST_HEADER = ("id", "path", "label", "group")


class ManifestError(ValueError):
    """Malformed manifest text; `line` is the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    path: str
    label: int  # +1 adulterated, -1 normal
    group: int  # 1 or 2

    def __post_init__(self):
        if not self.sample_id:
            raise ValueError("sample id must be non-empty")
        if not self.path:
            raise ValueError("path must be non-empty")
        if self.label not in LABEL_NAMES:
            raise ValueError("label must be +1 or -1")
        if self.group not in (1, 2):
            raise ValueError("group must be 1 or 2")


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for e in self.entries:
            if e.sample_id in seen:
                raise ValueError(f"duplicate id {e.sample_id!r}")
            seen.add(e.sample_id)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int
    per_class: int
    width: int
    height: int
    smoothing_radius: int = 2

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.per_class < 2:
            raise ValueError("per_class must be at least 2")
        if self.width < 8 or self.height < 8:
            raise ValueError("synthetic images must be at least 8x8")
        if self.smoothing_radius < 0:
            raise ValueError("smoothing_radius must be non-negative")


class SplitMix64:
    """Deterministic 64-bit generator.

    State update: s <- (s + 0x9E3779B97F4A7C15) mod 2^64. Output: z = s,
    z ^= z >> 30, z *= 0xBF58476D1CE4E5B9, z ^= z >> 27,
    z *= 0x94D049BB133111EB, z ^= z >> 31 (all mod 2^64). Pixel bytes take
    the top 8 bits of an output; bounded draws reduce an output modulo the
    bound.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def next_byte(self) -> int:
        return self.next_u64() >> 56

    def next_below(self, bound: int) -> int:
        return self.next_u64() % bound


def load_manifest(data: bytes | str) -> Manifest:
    """Parse manifest text, reporting defects with their line number."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines:
        raise ManifestError("missing header", 1)
    header = tuple(next(csv.reader([lines[0]])))
    if header != MANIFEST_HEADER:
        raise ManifestError(
            f"header must be {','.join(MANIFEST_HEADER)!r}, got {lines[0]!r}", 1
        )
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = next(csv.reader([line]))
        if len(fields) != 4:
            raise ManifestError(f"expected 4 fields, got {len(fields)}", lineno)
        sample_id, path, label_token, group_token = fields
        if not sample_id:
            raise ManifestError("missing id", lineno)
        if not path:
            raise ManifestError("missing path", lineno)
        if label_token not in LABEL_VALUES:
            raise ManifestError(f"unknown label {label_token!r}", lineno)
        if group_token not in ("1", "2"):
            raise ManifestError(f"unknown group {group_token!r}", lineno)
        if sample_id in seen:
            raise ManifestError(f"duplicate id {sample_id!r}", lineno)
        seen.add(sample_id)
        entries.append(
            ManifestEntry(sample_id, path, LABEL_VALUES[label_token], int(group_token))
        )
    return Manifest(tuple(entries))


def serialize_manifest(manifest: Manifest) -> str:
    """Render manifest text; load_manifest(serialize_manifest(m)) == m."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MANIFEST_HEADER)
    for e in manifest.entries:
        writer.writerow([e.sample_id, e.path, LABEL_NAMES[e.label], str(e.group)])
    return buf.getvalue()


def filter_group(manifest: Manifest, group: int) -> Manifest:
    """Entries of one group, original order preserved; may be empty."""
    if group not in (1, 2):
        raise ValueError("group must be 1 or 2")
    return Manifest(tuple(e for e in manifest.entries if e.group == group))


def _box_blur(pixels: np.ndarray, radius: int) -> np.ndarray:
    """Mean over a (2r+1)^2 window clipped to the image, rounded half-up."""
    if radius == 0:
        return pixels.copy()
    h, w = pixels.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.int64)
    integral[1:, 1:] = pixels.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    y0 = np.maximum(np.arange(h) - radius, 0)
    y1 = np.minimum(np.arange(h) + radius + 1, h)
    x0 = np.maximum(np.arange(w) - radius, 0)
    x1 = np.minimum(np.arange(w) + radius + 1, w)
    sums = (
        integral[np.ix_(y1, x1)]
        - integral[np.ix_(y0, x1)]
        - integral[np.ix_(y1, x0)]
        + integral[np.ix_(y0, x0)]
    )
    counts = (y1 - y0)[:, None] * (x1 - x0)[None, :]
    return (2 * sums + counts) // (2 * counts)


def generate_synthetic(spec: SyntheticSpec) -> tuple[list[GrayImage], Manifest]:
    """Build the paired synthetic benchmark; same spec, same bytes.

    The stream is consumed in a fixed order per pair k: height*width pixel
    bytes row-major for the noise field, then the Fisher-Yates draws that
    permute the blurred result into the adulterated twin. Pairs alternate
    between groups 1 and 2. Twin gray-level histograms are verified equal
    before returning.
    """
    rng = SplitMix64(spec.seed)
    images: list[GrayImage] = []
    entries: list[ManifestEntry] = []
    n = spec.width * spec.height
    for k in range(spec.per_class):
        raw = np.empty(n, dtype=np.int64)
        for i in range(n):
            raw[i] = rng.next_byte()
        normal_pixels = _box_blur(raw.reshape(spec.height, spec.width), spec.smoothing_radius)

        shuffled = normal_pixels.ravel().copy()
        for i in range(n - 1, 0, -1):
            j = rng.next_below(i + 1)
            shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
        adulterated_pixels = shuffled.reshape(spec.height, spec.width)

        if not np.array_equal(
            np.bincount(normal_pixels.ravel(), minlength=256),
            np.bincount(adulterated_pixels.ravel(), minlength=256),
        ):
            raise AssertionError("twin images must share their gray histogram exactly")

        group = 1 if k % 2 == 0 else 2
        for label_name, pixels in (("normal", normal_pixels), ("adulterated", adulterated_pixels)):
            sample_id = f"{label_name}-{k:03d}"
            images.append(GrayImage(pixels))
            entries.append(
                ManifestEntry(sample_id, f"{sample_id}.pgm", LABEL_VALUES[label_name], group)
            )
    return images, Manifest(tuple(entries))
