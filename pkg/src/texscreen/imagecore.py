"""Raster primitives: portable graymap/pixmap IO, grayscale conversion, resizing.

Only uncompressed netpbm formats with maxval 255 are handled (P2/P5 graymaps,
P3/P6 pixmaps), which keeps image IO bit-exact and dependency-free. Every
place a real number becomes a pixel value uses round-half-up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_WHITESPACE = b" \t\n\r\x0b\x0c"


class PnmDecodeError(ValueError):
    """Malformed netpbm data; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(eq=False)
class GrayImage:
    """Single-channel 8-bit raster, row-major."""

    pixels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 2:
            raise ValueError("gray image pixels must form a 2-D array")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError("pixel values must be integers")
        if a.min() < 0 or a.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        self.pixels = a.astype(np.uint8)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(eq=False)
class RgbImage:
    """Three-channel 8-bit raster, row-major, channel order (r, g, b)."""

    pixels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.pixels)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError("rgb image pixels must form an (H, W, 3) array")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError("pixel values must be integers")
        if a.min() < 0 or a.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        self.pixels = a.astype(np.uint8)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class Resolution:
    """Target size for resizing, in pixels."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("resolution dimensions must be positive")

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


def _skip_filler(data: bytes, pos: int) -> int:
    # whitespace and '#' comments may separate header tokens
    while pos < len(data):
        b = data[pos]
        if b in _WHITESPACE:
            pos += 1
        elif b == 0x23:  # '#'
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int, what: str) -> tuple[bytes, int, int]:
    pos = _skip_filler(data, pos)
    if pos >= len(data):
        raise PnmDecodeError(f"unexpected end of data while reading {what}", pos)
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    return data[start:pos], start, pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    token, start, end = _read_token(data, pos, what)
    if not token.isdigit():
        raise PnmDecodeError(f"malformed {what} token {token!r}", start)
    return int(token), start, end


def decode_image(data: bytes) -> GrayImage | RgbImage:
    """Decode a P2/P5 graymap or P3/P6 pixmap with maxval 255.

    Returns a GrayImage for graymaps and an RgbImage for pixmaps. Raises
    PnmDecodeError for bad magic, malformed or missing header tokens,
    maxval other than 255, zero dimensions, and truncated payloads; the
    error carries the byte offset of the defect.
    """
    magic, magic_at, pos = _read_token(data, 0, "magic")
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise PnmDecodeError(f"unsupported magic {magic!r}", magic_at)
    ascii_payload = magic in (b"P2", b"P3")
    channels = 3 if magic in (b"P3", b"P6") else 1

    width, width_at, pos = _read_int(data, pos, "width")
    if width == 0:
        raise PnmDecodeError("zero width", width_at)
    height, height_at, pos = _read_int(data, pos, "height")
    if height == 0:
        raise PnmDecodeError("zero height", height_at)
    maxval, maxval_at, pos = _read_int(data, pos, "maxval")
    if maxval != 255:
        raise PnmDecodeError(f"unsupported maxval {maxval}", maxval_at)

    count = width * height * channels
    if ascii_payload:
        values = np.empty(count, dtype=np.uint8)
        for k in range(count):
            v, v_at, pos = _read_int(data, pos, "pixel value")
            if v > 255:
                raise PnmDecodeError(f"pixel value {v} exceeds maxval 255", v_at)
            values[k] = v
    else:
        # exactly one whitespace byte separates the header from the payload
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise PnmDecodeError("expected whitespace before binary payload", pos)
        pos += 1
        if len(data) - pos < count:
            raise PnmDecodeError(
                f"truncated payload: expected {count} bytes, found {len(data) - pos}",
                len(data),
            )
        values = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos).copy()

    if channels == 1:
        return GrayImage(values.reshape(height, width))
    return RgbImage(values.reshape(height, width, 3))


def encode_pgm(img: GrayImage) -> bytes:
    """Serialize a GrayImage as a binary graymap (P5, maxval 255).

    decode_image(encode_pgm(img)) reproduces img exactly.
    """
    header = f"P5 {img.width} {img.height} 255\n".encode("ascii")
    return header + img.pixels.tobytes()


def to_grayscale(img: RgbImage) -> GrayImage:
    """Convert an RgbImage to gray with BT.601 luma weights 0.299/0.587/0.114.

    Computed in exact integer milli-weights with decimal round-half-up,
    so (v, v, v) maps to v for every v. The weights sum to one, hence the
    result always lands in [0, 255].
    """
    p = img.pixels.astype(np.int64)
    luma = (299 * p[..., 0] + 587 * p[..., 1] + 114 * p[..., 2] + 500) // 1000
    return GrayImage(luma)


def resize_bilinear(img: GrayImage, target: Resolution) -> GrayImage:
    """Resize with bilinear interpolation under pixel-center alignment.

    Destination pixel (x, y) samples the source at
    ((x + 0.5) * W_src / W_dst - 0.5, (y + 0.5) * H_src / H_dst - 0.5),
    clamped to the source extent; interpolated values are rounded half-up.
    Resizing to the source resolution is the identity.
    """
    src = img.pixels.astype(np.float64)
    h_src, w_src = src.shape

    sx = ((np.arange(target.width) + 0.5) * w_src) / target.width - 0.5
    sy = ((np.arange(target.height) + 0.5) * h_src) / target.height - 0.5
    np.clip(sx, 0.0, w_src - 1.0, out=sx)
    np.clip(sy, 0.0, h_src - 1.0, out=sy)

    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    fx = sx - x0
    fy = sy - y0
    x1 = np.minimum(x0 + 1, w_src - 1)
    y1 = np.minimum(y0 + 1, h_src - 1)

    top = src[np.ix_(y0, x0)] * (1.0 - fx) + src[np.ix_(y0, x1)] * fx
    bottom = src[np.ix_(y1, x0)] * (1.0 - fx) + src[np.ix_(y1, x1)] * fx
    values = top * (1.0 - fy[:, None]) + bottom * fy[:, None]

    out = np.floor(values + 0.5)
    np.clip(out, 0.0, 255.0, out=out)
    return GrayImage(out.astype(np.int64))
