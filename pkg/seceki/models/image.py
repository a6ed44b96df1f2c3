"""Grayscale images for the deblurring experiment.

Images are ``ImageBuffer`` objects holding intensities in [0, 1]. The
flattening convention is row-major: pixel (row r, column c) of an H x W image
is component ``r * W + c`` of the unknown vector.

PGM (P2 ASCII and P5 binary, maxval up to 65535) is read and written
natively; any other format goes through Pillow and is converted to 8-bit
grayscale.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import PIL.Image
from PIL import UnidentifiedImageError

from seceki.core.exceptions import ParseError
from seceki.core.exceptions import StorageError
from seceki.core.exceptions import StructuralError
from seceki.utils.log import get_seceki_logger
from seceki.utils.storage import atomic_write_bytes

__all__ = (
    "ImageBuffer",
    "load_pgm",
    "save_pgm",
    "parse_pgm",
    "encode_pgm",
    "load_image",
    "resize",
    "psnr",
    "synthetic_image",
)

logger = get_seceki_logger(__name__)

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=float)
        if pixels.ndim != 2 or 0 in pixels.shape:
            raise StructuralError(f"Image must be a non-empty 2-D array, got shape {pixels.shape}")
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def flatten(self) -> np.ndarray:
        return self.pixels.reshape(-1).copy()

    @classmethod
    def unflatten(cls, vector, height: int, width: int) -> ImageBuffer:
        vector = np.asarray(vector, dtype=float)
        if vector.size != height * width:
            raise StructuralError(f"Cannot unflatten {vector.size} values into {height}x{width}")
        return cls(vector.reshape(height, width))


def _next_token(data: bytes, pos: int, what: str, path=None) -> tuple[bytes, int, int]:
    match = _TOKEN.match(data, pos)
    if match is None:
        raise ParseError(f"Missing {what} in PGM header", offset=pos, path=path)
    return match.group(1), match.start(1), match.end()


def _header_int(data: bytes, pos: int, what: str, path=None) -> tuple[int, int]:
    token, start, end = _next_token(data, pos, what, path)
    if not token.isdigit():
        raise ParseError(f"Invalid {what} {token!r} in PGM header", offset=start, path=path)
    return int(token), end


def parse_pgm(data: bytes, path=None) -> ImageBuffer:
    """
    Decode P2 or P5 PGM bytes.

    Raises:
        ParseError: With the byte offset of the malformed header field or of
            the truncated payload.
    """
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"Not a PGM file (magic {magic!r})", offset=0, path=path)
    pos = 2
    width, pos = _header_int(data, pos, "width", path)
    height, pos = _header_int(data, pos, "height", path)
    maxval, pos = _header_int(data, pos, "maxval", path)
    if width < 1 or height < 1:
        raise ParseError(f"Image size {width}x{height} must be positive", offset=pos, path=path)
    if not 0 < maxval <= 65535:
        raise ParseError(f"maxval {maxval} out of range 1..65535", offset=pos, path=path)

    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        if len(data) - pos < needed:
            raise ParseError(f"Truncated PGM payload: need {needed} bytes, have {max(len(data) - pos, 0)}", offset=len(data), path=path)
        values = np.frombuffer(data, dtype=dtype, count=count, offset=pos).astype(float)
    else:
        values = np.empty(count)
        for n in range(count):
            try:
                token, start, pos = _next_token(data, pos, "pixel", path)
            except ParseError as e:
                raise ParseError(f"Truncated PGM payload after {n} of {count} pixels", offset=len(data), path=path) from e
            if not token.isdigit():
                raise ParseError(f"Invalid pixel value {token!r}", offset=start, path=path)
            values[n] = int(token)

    if values.max() > maxval:
        raise ParseError(f"Pixel value {int(values.max())} exceeds maxval {maxval}", offset=pos, path=path)
    return ImageBuffer((values / maxval).reshape(height, width))


def encode_pgm(img: ImageBuffer, maxval: int = 255) -> bytes:
    """Encode as binary P5; intensities are clipped to [0, 1] and rounded."""
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval {maxval} out of range 1..65535")
    levels = np.rint(np.clip(img.pixels, 0.0, 1.0) * maxval)
    dtype = ">u2" if maxval > 255 else "u1"
    header = f"P5\n{img.width} {img.height}\n{maxval}\n".encode("ascii")
    return header + levels.astype(dtype).tobytes()


def load_pgm(path) -> ImageBuffer:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise StorageError(f"Cannot read image: {e}", path=path) from e
    return parse_pgm(data, path=path)


def save_pgm(img: ImageBuffer, path, maxval: int = 255) -> Path:
    path = Path(path)
    atomic_write_bytes(path, encode_pgm(img, maxval))
    logger.debug("Wrote %dx%d PGM to %s", img.height, img.width, path)
    return path


def load_image(path) -> ImageBuffer:
    """Load PGM natively, anything else through Pillow as 8-bit grayscale."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            magic = fh.read(2)
    except OSError as e:
        raise StorageError(f"Cannot read image: {e}", path=path) from e
    if magic in (b"P2", b"P5"):
        return load_pgm(path)
    try:
        with PIL.Image.open(path) as im:
            gray = np.asarray(im.convert("L"), dtype=float) / 255.0
    except UnidentifiedImageError as e:
        raise ParseError("Unrecognized image format", offset=0, path=path) from e
    except OSError as e:
        raise StorageError(f"Cannot read image: {e}", path=path) from e
    return ImageBuffer(gray)


def resize(img: ImageBuffer, height: int, width: int) -> ImageBuffer:
    if img.shape == (height, width):
        return img
    im = PIL.Image.fromarray(img.pixels.astype(np.float32))
    out = im.resize((width, height), PIL.Image.Resampling.BILINEAR)
    return ImageBuffer(np.clip(np.asarray(out, dtype=float), 0.0, 1.0))


def psnr(a, b, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; infinite for identical inputs."""
    a = a.pixels if isinstance(a, ImageBuffer) else np.asarray(a, dtype=float)
    b = b.pixels if isinstance(b, ImageBuffer) else np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise StructuralError(f"PSNR of images with shapes {a.shape} and {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(peak * peak / mse)


def synthetic_image(height: int = 32, width: int = 32) -> ImageBuffer:
    """Deterministic test scene: shaded background, a bright disk, a dark bar and a mid-gray block."""
    rows, cols = np.mgrid[0:height, 0:width]
    y = (rows + 0.5) / height
    x = (cols + 0.5) / width
    pixels = 0.2 + 0.2 * x
    pixels = np.where((x - 0.35) ** 2 + (y - 0.4) ** 2 < 0.18**2, 0.95, pixels)
    pixels = np.where((np.abs(x - 0.75) < 0.06) & (y > 0.15) & (y < 0.85), 0.05, pixels)
    pixels = np.where((x > 0.2) & (x < 0.55) & (y > 0.7) & (y < 0.88), 0.6, pixels)
    return ImageBuffer(pixels)
