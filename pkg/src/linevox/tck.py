"""Read / write access to the TCK streamline container.

A TCK file is an ASCII header followed by a binary body.  The header starts
with the magic line ``mrtrix tracks``, continues with ``key: value`` lines,
and is terminated by a line reading ``END``.  The ``file: . <offset>`` entry
gives the byte offset of the binary body from the start of the file.  The
body is a flat run of little-endian float32 (x, y, z) triplets where an
all-NaN triplet terminates a streamline and an all-Inf triplet terminates
the stream.  Only ``datatype: Float32LE`` is supported.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadOffset,
    CorruptBody,
    MalformedHeader,
    MissingMagic,
    TruncatedBody,
    UnsupportedDatatype,
)

MAGIC = b"mrtrix tracks"

_TRIPLET_BYTES = 12  # 3 * sizeof(float32)
# Header fields regenerated on write; everything else is preserved verbatim.
_MANAGED_KEYS = ("count", "datatype", "file")

_AXIS_NAMES = {"x": 0, "y": 1, "z": 2}


@dataclass(eq=False)
class StreamlineSet:
    """Ordered streamlines, each an ``(n, 3)`` float32 array of mm points.

    Every streamline has at least two points; degenerate ones are dropped
    (and counted) by the parser.  ``source_header`` preserves the raw header
    key/value pairs of the file the set was read from, if any.
    """

    streamlines: list[np.ndarray]
    source_header: dict[str, str] = field(default_factory=dict)

    @property
    def n_streamlines(self) -> int:
        return len(self.streamlines)

    @property
    def n_points(self) -> int:
        return sum(len(s) for s in self.streamlines)

    @property
    def n_segments(self) -> int:
        """Total count of consecutive point pairs."""
        return sum(len(s) - 1 for s in self.streamlines)


def parse_tck(data: bytes) -> StreamlineSet:
    """Parse TCK bytes into a :class:`StreamlineSet`.

    Raises
    ------
    MissingMagic, MalformedHeader, UnsupportedDatatype, BadOffset,
    TruncatedBody, CorruptBody
        On the corresponding violation.  No sentinel (NaN/Inf) coordinate
        ever escapes into the returned set.
    """
    header, body_offset = _parse_header(data)

    if header.get("datatype") != "Float32LE":
        raise UnsupportedDatatype(
            f"only datatype Float32LE is supported, got {header.get('datatype')!r}"
        )

    body = data[body_offset:]
    n_full = len(body) // _TRIPLET_BYTES
    triplets = np.frombuffer(
        body[: n_full * _TRIPLET_BYTES], dtype="<f4"
    ).reshape(-1, 3)

    eof_rows = np.flatnonzero(np.isinf(triplets).all(axis=1))
    if eof_rows.size == 0:
        if len(body) % _TRIPLET_BYTES:
            raise TruncatedBody("body ends mid-triplet")
        raise TruncatedBody("no all-Inf terminator triplet found")
    coords = triplets[: eof_rows[0]]

    delim = np.isnan(coords).all(axis=1)
    bad = ~np.isfinite(coords).all(axis=1) & ~delim
    if bad.any():
        raise CorruptBody(
            f"non-finite coordinate outside sentinel triplet at row {np.flatnonzero(bad)[0]}"
        )

    streamlines = []
    n_dropped = 0
    start = 0
    boundaries = list(np.flatnonzero(delim)) + [len(coords)]
    for stop in boundaries:
        pts = coords[start:stop]
        start = stop + 1
        if len(pts) == 0 and stop == len(coords):
            break  # no data between last delimiter and the terminator
        if len(pts) < 2:
            n_dropped += 1
            continue
        streamlines.append(np.ascontiguousarray(pts))
    if n_dropped:
        warnings.warn(
            f"dropped {n_dropped} streamline(s) with fewer than 2 points",
            stacklevel=2,
        )

    return StreamlineSet(streamlines, header)


def _parse_header(data: bytes) -> tuple[dict[str, str], int]:
    """Return (header map, body offset); validates magic, END and offset."""
    nl = data.find(b"\n")
    first = data if nl < 0 else data[:nl]
    if first.strip() != MAGIC:
        raise MissingMagic("file does not start with 'mrtrix tracks'")
    if nl < 0:
        raise MalformedHeader("header has no END line")

    header: dict[str, str] = {}
    pos = nl + 1
    while True:
        nxt = data.find(b"\n", pos)
        if nxt < 0:
            raise MalformedHeader("header has no END line")
        raw, pos = data[pos:nxt], nxt + 1
        try:
            line = raw.decode("ascii").strip()
        except UnicodeDecodeError as e:
            raise MalformedHeader(f"non-ASCII header line: {raw[:40]!r}") from e
        if line == "END":
            break
        if ":" not in line:
            raise MalformedHeader(f"expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        header[key.strip()] = value.strip()

    file_field = header.get("file")
    if file_field is None:
        raise BadOffset("header has no 'file: . <offset>' entry")
    parts = file_field.split()
    if len(parts) != 2 or parts[0] != ".":
        raise BadOffset(f"unsupported file entry {file_field!r}")
    try:
        offset = int(parts[1])
    except ValueError as e:
        raise BadOffset(f"non-integer offset in {file_field!r}") from e
    if offset < pos or offset > len(data):
        raise BadOffset(f"offset {offset} outside [{pos}, {len(data)}]")
    return header, offset


def write_tck(sset: StreamlineSet) -> bytes:
    """Serialize to TCK bytes; ``parse_tck`` on the result gives back the
    same streamlines with bitwise-equal coordinates."""
    for i, s in enumerate(sset.streamlines):
        arr = np.asarray(s)
        if arr.ndim != 2 or arr.shape[1] != 3 or len(arr) < 2:
            raise ValueError(f"streamline {i} is not an (n>=2, 3) array")
        if not np.isfinite(arr).all():
            raise ValueError(f"streamline {i} contains non-finite points")

    lines = [MAGIC.decode()]
    lines += [
        f"{k}: {v}" for k, v in sset.source_header.items() if k not in _MANAGED_KEYS
    ]
    lines.append(f"count: {sset.n_streamlines}")
    lines.append("datatype: Float32LE")
    # The offset counts its own decimal digits; iterate to the fixed point.
    base = len("\n".join(lines)) + len("\nfile: . ") + len("\nEND\n")
    offset = base
    while len(str(offset)) + base != offset:
        offset = len(str(offset)) + base
    lines.append(f"file: . {offset}")
    lines.append("END\n")
    header = "\n".join(lines).encode("ascii")
    assert len(header) == offset

    nan_row = np.full((1, 3), np.nan, dtype="<f4")
    chunks = [header]
    for s in sset.streamlines:
        chunks.append(np.asarray(s, dtype="<f4").tobytes())
        chunks.append(nan_row.tobytes())
    chunks.append(np.full((1, 3), np.inf, dtype="<f4").tobytes())
    return b"".join(chunks)


def synth_grid_lines(
    count: int, spacing: float, length: float, step: float, axis: str | int
) -> StreamlineSet:
    """Deterministic test fixture: `count` parallel straight streamlines.

    Lines run along `axis` with a point every `step` mm, from 0 to `length`
    inclusive; line ``i`` is offset by ``i * spacing`` mm along the next
    axis (X lines fan out along Y, Y along Z, Z along X).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if spacing <= 0 or step <= 0:
        raise ValueError("spacing and step must be > 0")
    ax = _AXIS_NAMES[axis.lower()] if isinstance(axis, str) else int(axis)
    if ax not in (0, 1, 2):
        raise ValueError(f"bad axis {axis!r}")

    n_pts = int(np.floor(length / step + 1e-9)) + 1
    t = np.arange(n_pts, dtype=np.float64) * step
    off_ax = (ax + 1) % 3
    streamlines = []
    for i in range(count):
        pts = np.zeros((n_pts, 3), dtype=np.float64)
        pts[:, ax] = t
        pts[:, off_ax] = i * spacing
        streamlines.append(pts.astype(np.float32))
    return StreamlineSet(streamlines, {"synthetic": "grid_lines"})
