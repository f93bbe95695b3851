"""24-bit uncompressed true-color TGA frame buffer."""

from __future__ import annotations

import struct

import numpy as np

TGA_HEADER = struct.Struct("<BBBHHBHHHHBB")
TRUE_COLOR = 2
TOP_LEFT = 0x20


class TGAImage:
    """A rows x cols frame stored as BGR byte triples, row 0 at the top."""

    def __init__(self, bitmap: int, image_type: int, rows: int, cols: int):
        if bitmap != 24 or image_type != TRUE_COLOR:
            raise ValueError("only 24-bit type-2 TGA supported")
        if rows < 1 or cols < 1 or rows > 0xFFFF or cols > 0xFFFF:
            raise ValueError(f"image sides must lie in [1, 65535], got {rows}x{cols}")
        self.bitmap = bitmap
        self.image_type = image_type
        self.rows = rows
        self.cols = cols
        self.pixels = np.zeros((rows, cols, 3), dtype=np.uint8)

    @property
    def width(self) -> int:
        return self.cols

    @property
    def height(self) -> int:
        return self.rows

    def __len__(self) -> int:
        return self.rows * self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, TGAImage):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and np.array_equal(self.pixels, other.pixels)

    def _check(self, col: int, row: int) -> None:
        if not (0 <= col < self.cols and 0 <= row < self.rows):
            raise IndexError(f"pixel ({col}, {row}) outside {self.cols}x{self.rows} image")

    def set_pixel(self, col: int, row: int, r: int, g: int, b: int) -> None:
        self._check(col, row)
        for c in (r, g, b):
            if not 0 <= c <= 255:
                raise ValueError(f"channel value {c} outside [0, 255]")
        self.pixels[row, col] = (b, g, r)

    def get_pixel(self, col: int, row: int) -> tuple[int, int, int]:
        self._check(col, row)
        b, g, r = self.pixels[row, col]
        return int(r), int(g), int(b)

    def set_rgb_array(self, rgb: np.ndarray) -> None:
        """Fill from an (rows, cols, 3) uint8 RGB array."""
        if rgb.shape != (self.rows, self.cols, 3):
            raise ValueError(f"expected shape {(self.rows, self.cols, 3)}, got {rgb.shape}")
        self.pixels[...] = rgb[..., ::-1]

    def encode(self) -> bytes:
        return encode_tga(self)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(encode_tga(self))


def new_image(bitmap: int, image_type: int, rows: int, cols: int) -> TGAImage:
    return TGAImage(bitmap, image_type, rows, cols)


def set_pixel(image: TGAImage, col: int, row: int, r: int, g: int, b: int) -> TGAImage:
    image.set_pixel(col, row, r, g, b)
    return image


def encode_tga(image: TGAImage) -> bytes:
    """18-byte header followed by top-down BGR rows, no footer."""
    header = TGA_HEADER.pack(
        0,              # id length
        0,              # no colour map
        TRUE_COLOR,
        0, 0, 0,        # colour-map spec
        0, 0,           # x, y origin
        image.cols,
        image.rows,
        24,
        TOP_LEFT,
    )
    return header + np.ascontiguousarray(image.pixels).tobytes()


def write_tga(image: TGAImage, path) -> None:
    image.save(path)
