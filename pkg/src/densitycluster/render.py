"""Deterministic SVG rendering of cluster documents.

One filled path per cluster (outer ring plus holes, even-odd fill), colored
from a 10-color palette, with an optional grayscale density underlay embedded
as a PNG. Byte output is a pure function of the inputs.
"""
from __future__ import annotations

import base64
import struct
import zlib

import numpy as np

from .labeling import format_number as _fmt

PALETTE10 = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def _png_gray(img: np.ndarray) -> bytes:
    """Minimal 8-bit grayscale PNG encoder (filter 0 rows, fixed zlib level)."""
    h, w = img.shape
    raw = b"".join(b"\x00" + img[y].tobytes() for y in range(h))

    def chunk(tag: bytes, payload: bytes) -> bytes:
        crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
        return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)

    ihdr = struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n"
            + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(raw, 9))
            + chunk(b"IEND", b""))


def _underlay_element(density: np.ndarray, vp: dict) -> str:
    # brightest pixel maps to full ink; SVG rows run top-down so flip y
    peak = float(density.max())
    if peak > 0:
        gray = 255 - np.rint(density * (255.0 / peak)).astype(np.uint8)
    else:
        gray = np.full(density.shape, 255, dtype=np.uint8)
    png = _png_gray(gray[::-1])
    b64 = base64.b64encode(png).decode("ascii")
    return (
        f'<image x="{_fmt(vp["x_min"])}" y="{_fmt(vp["y_min"])}"'
        f' width="{_fmt(vp["x_max"] - vp["x_min"])}"'
        f' height="{_fmt(vp["y_max"] - vp["y_min"])}"'
        f' preserveAspectRatio="none" image-rendering="pixelated"'
        f' href="data:image/png;base64,{b64}"/>'
    )


def render_svg(doc: dict, underlay: np.ndarray | None = None) -> bytes:
    """Render a cluster document to SVG bytes.

    Geometry is drawn in data coordinates with the y axis flipped so that
    larger data y is higher on screen.
    """
    vp = doc["viewport"]
    x0, x1 = vp["x_min"], vp["x_max"]
    y0, y1 = vp["y_min"], vp["y_max"]
    span_x, span_y = x1 - x0, y1 - y0
    flip = y0 + y1  # y_svg = flip - y_data

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(span_x)} {_fmt(span_y)}" '
        f'width="800" height="{_fmt(800 * span_y / span_x)}">',
    ]
    if underlay is not None:
        lines.append(_underlay_element(underlay, vp))

    stroke_w = 0.002 * max(span_x, span_y)
    for cluster in sorted(doc["clusters"], key=lambda c: c["id"]):
        rings = [cluster["outer"]] + cluster["holes"]
        d_parts = []
        for ring in rings:
            pts = [f"{_fmt(x)},{_fmt(flip - y)}" for x, y in ring]
            d_parts.append("M" + "L".join(pts) + "Z")
        color = PALETTE10[cluster["color"] % len(PALETTE10)]
        lines.append(
            f'<path d="{"".join(d_parts)}" fill="{color}" fill-opacity="0.55" '
            f'fill-rule="evenodd" stroke="{color}" stroke-width="{_fmt(stroke_w)}"/>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
