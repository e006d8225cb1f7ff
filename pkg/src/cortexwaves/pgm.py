"""Reading and writing portable graymap (PGM) files.

Both the ASCII (``P2``) and binary (``P5``) variants are supported, with
``maxval`` up to 65535. Binary samples wider than one byte are big-endian,
as the netpbm format requires.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["PGMError", "read_pgm", "write_pgm"]


class PGMError(ValueError):
    """Raised for malformed or unsupported graymap files."""


def _header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Pull ``count`` integer tokens after the magic number, skipping comments.

    Returns the tokens and the offset of the byte right after the last one.
    """
    tokens = []
    pos = 2
    n = len(data)
    while len(tokens) < count:
        if pos >= n:
            raise PGMError("truncated header")
        ch = data[pos:pos + 1]
        if ch == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            start = pos
            while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
                pos += 1
            word = data[start:pos]
            if not word.isdigit():
                raise PGMError(f"bad header token {word!r}")
            tokens.append(int(word))
    return tokens, pos


def read_pgm(path: str | os.PathLike) -> tuple[np.ndarray, int]:
    """Read a graymap and return ``(samples, maxval)``.

    ``samples`` is a ``(height, width)`` integer array.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise PGMError(f"cannot read {path}: {exc}") from exc

    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"unsupported format {magic!r} (expected P2 or P5)")

    (width, height, maxval), pos = _header_tokens(data, 3)
    if width < 1 or height < 1:
        raise PGMError("empty image")
    if not 0 < maxval < 65536:
        raise PGMError(f"maxval {maxval} out of range")

    if magic == b"P2":
        words = data[pos:].split()
        if len(words) < width * height:
            raise PGMError("not enough samples")
        samples = np.array([int(w) for w in words[: width * height]], dtype=np.int64)
    else:
        # exactly one whitespace byte separates header and raster
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        nbytes = width * height * dtype.itemsize
        raster = data[pos:pos + nbytes]
        if len(raster) < nbytes:
            raise PGMError("truncated raster")
        samples = np.frombuffer(raster, dtype=dtype).astype(np.int64)

    if samples.max(initial=0) > maxval:
        raise PGMError("sample exceeds maxval")
    return samples.reshape(height, width), maxval


def write_pgm(path: str | os.PathLike, samples: np.ndarray, maxval: int,
              binary: bool = True) -> None:
    """Write an integer array as a graymap."""
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise PGMError("graymap must be two-dimensional")
    if not 0 < maxval < 65536:
        raise PGMError(f"maxval {maxval} out of range")
    if samples.min(initial=0) < 0 or samples.max(initial=0) > maxval:
        raise PGMError("samples outside [0, maxval]")
    height, width = samples.shape
    if binary:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        body = samples.astype(dtype).tobytes()
        with open(path, "wb") as fh:
            fh.write(b"P5\n%d %d\n%d\n" % (width, height, maxval))
            fh.write(body)
    else:
        lines = [" ".join(str(int(v)) for v in row) for row in samples]
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"P2\n{width} {height}\n{maxval}\n")
            fh.write("\n".join(lines))
            fh.write("\n")
