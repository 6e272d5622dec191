"""Labeled point clouds and their CSV / binary serialization.

All coordinates are in meters.  A cloud is stored as parallel numpy arrays
(one row per point) so downstream voxelization and raytracing stay
vectorized; ``LabeledPoint`` is only a convenience view for single-point
access.

File formats:
  csv-ascii   one record per line, ``x,y,z[,label[,tree_id,segment_id]]``
              with label in {trunk, foliage, unknown}.  Missing labels read
              as unknown.  The two optional integer columns carry scan
              provenance (source tree and mesh segment).
  binary-xyz  little-endian 3 x float64 + 1 unsigned label byte per record
              (25 bytes); no provenance columns.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import CloudParseError, EmptyCloudError, ParameterError

LABEL_UNKNOWN = 0
LABEL_TRUNK = 1
LABEL_FOLIAGE = 2

LABEL_NAMES = {LABEL_UNKNOWN: "unknown", LABEL_TRUNK: "trunk", LABEL_FOLIAGE: "foliage"}
LABEL_CODES = {name: code for code, name in LABEL_NAMES.items()}

_RECORD = struct.Struct("<dddB")

CSV_FORMAT = "csv-ascii"
BINARY_FORMAT = "binary-xyz"


@dataclass(frozen=True)
class LabeledPoint:
    """A single cloud point: position, semantic label, optional source tag."""

    x: float
    y: float
    z: float
    label: int = LABEL_UNKNOWN
    source_id: int | None = None


class PointCloud:
    """An ordered collection of labeled 3D points.

    Attributes
    ----------
    xyz : (n, 3) float64 array of coordinates in meters.
    labels : (n,) uint8 array with values in {0 unknown, 1 trunk, 2 foliage}.
    source_ids : optional (n,) int64 array tagging tree / scan identity.
    segment_ids : optional (n,) int64 array tagging the mesh segment that
        produced each point (virtual scans only).
    crs_note : free-text provenance.
    """

    def __init__(self, xyz, labels=None, source_ids=None, segment_ids=None, crs_note=""):
        xyz = np.asarray(xyz, dtype=np.float64).reshape(-1, 3)
        if xyz.size and not np.all(np.isfinite(xyz)):
            raise ParameterError("point coordinates must be finite")
        self.xyz = xyz
        n = len(xyz)
        if labels is None:
            labels = np.zeros(n, dtype=np.uint8)
        else:
            labels = np.asarray(labels, dtype=np.uint8)
            if labels.shape != (n,):
                raise ParameterError("labels must have one entry per point")
            if labels.size and labels.max() > LABEL_FOLIAGE:
                raise ParameterError("labels must be in {0, 1, 2}")
        self.labels = labels
        self.source_ids = None if source_ids is None else np.asarray(source_ids, dtype=np.int64)
        self.segment_ids = None if segment_ids is None else np.asarray(segment_ids, dtype=np.int64)
        for extra in (self.source_ids, self.segment_ids):
            if extra is not None and extra.shape != (n,):
                raise ParameterError("provenance arrays must have one entry per point")
        self.crs_note = crs_note

    def __len__(self):
        return len(self.xyz)

    def __getitem__(self, i) -> LabeledPoint:
        x, y, z = self.xyz[i]
        src = None if self.source_ids is None else int(self.source_ids[i])
        return LabeledPoint(x, y, z, int(self.labels[i]), src)

    def subset(self, indices) -> "PointCloud":
        """New cloud with the given point rows, preserving their order."""
        indices = np.asarray(indices, dtype=np.int64)
        return PointCloud(
            self.xyz[indices],
            self.labels[indices],
            None if self.source_ids is None else self.source_ids[indices],
            None if self.segment_ids is None else self.segment_ids[indices],
            self.crs_note,
        )

    @property
    def has_provenance(self):
        return self.source_ids is not None and self.segment_ids is not None


def _parse_csv(path) -> PointCloud:
    xyz = []
    labels = []
    sources = []
    segments = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) not in (3, 4, 6):
                raise CloudParseError(
                    f"line {lineno}: expected 3, 4 or 6 columns, got {len(parts)}",
                    line=lineno,
                )
            if len(parts) == 6 and len(segments) != len(xyz):
                raise CloudParseError(
                    f"line {lineno}: provenance columns must appear on every record",
                    line=lineno,
                )
            try:
                xyz.append((float(parts[0]), float(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise CloudParseError(f"line {lineno}: bad coordinate ({exc})", line=lineno)
            if len(parts) >= 4:
                name = parts[3].strip()
                if name not in LABEL_CODES:
                    raise CloudParseError(f"line {lineno}: unknown label {name!r}", line=lineno)
                labels.append(LABEL_CODES[name])
            else:
                labels.append(LABEL_UNKNOWN)
            if len(parts) == 6:
                try:
                    sources.append(int(parts[4]))
                    segments.append(int(parts[5]))
                except ValueError as exc:
                    raise CloudParseError(f"line {lineno}: bad provenance ({exc})", line=lineno)
    if not xyz:
        raise EmptyCloudError(f"{path}: no points")
    if segments and len(segments) != len(xyz):
        raise CloudParseError("provenance columns must appear on every record")
    return PointCloud(
        np.array(xyz),
        np.array(labels, dtype=np.uint8),
        np.array(sources, dtype=np.int64) if sources else None,
        np.array(segments, dtype=np.int64) if segments else None,
    )


def _parse_binary(path) -> PointCloud:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) == 0:
        raise EmptyCloudError(f"{path}: no points")
    if len(blob) % _RECORD.size != 0:
        raise CloudParseError(
            f"{path}: truncated record at byte {len(blob) - len(blob) % _RECORD.size}",
            offset=len(blob) - len(blob) % _RECORD.size,
        )
    n = len(blob) // _RECORD.size
    xyz = np.empty((n, 3), dtype=np.float64)
    labels = np.empty(n, dtype=np.uint8)
    for i in range(n):
        x, y, z, lab = _RECORD.unpack_from(blob, i * _RECORD.size)
        if lab > LABEL_FOLIAGE:
            raise CloudParseError(f"record {i}: bad label byte {lab}", offset=i * _RECORD.size)
        xyz[i] = (x, y, z)
        labels[i] = lab
    if not np.all(np.isfinite(xyz)):
        raise CloudParseError(f"{path}: non-finite coordinate")
    return PointCloud(xyz, labels)


def load_cloud(path, format=CSV_FORMAT) -> PointCloud:
    """Read a point cloud from disk.

    Unlabeled CSV records get label = unknown.  Malformed records raise
    CloudParseError carrying the line / offset; an empty file raises
    EmptyCloudError.
    """
    if format == CSV_FORMAT:
        return _parse_csv(path)
    if format == BINARY_FORMAT:
        return _parse_binary(path)
    raise ParameterError(f"unknown cloud format {format!r}")


def format_csv_row(x, y, z, label=None, source_id=None, segment_id=None) -> str:
    cols = [repr(float(x)), repr(float(y)), repr(float(z))]
    if label is not None:
        cols.append(LABEL_NAMES[int(label)])
    if source_id is not None:
        cols.append(str(int(source_id)))
        cols.append(str(int(segment_id)))
    return ",".join(cols)


def save_cloud(cloud: PointCloud, path, format=CSV_FORMAT):
    """Write a cloud to disk in one of the two interchange formats.

    CSV floats are written with ``repr`` so a save/load round trip is
    bit-identical; the binary format is exact by construction.
    """
    if format == CSV_FORMAT:
        with_prov = cloud.has_provenance
        with open(path, "w", encoding="utf-8") as fh:
            for i in range(len(cloud)):
                fh.write(
                    format_csv_row(
                        cloud.xyz[i, 0],
                        cloud.xyz[i, 1],
                        cloud.xyz[i, 2],
                        cloud.labels[i],
                        cloud.source_ids[i] if with_prov else None,
                        cloud.segment_ids[i] if with_prov else None,
                    )
                )
                fh.write("\n")
    elif format == BINARY_FORMAT:
        with open(path, "wb") as fh:
            for i in range(len(cloud)):
                fh.write(
                    _RECORD.pack(
                        cloud.xyz[i, 0], cloud.xyz[i, 1], cloud.xyz[i, 2], int(cloud.labels[i])
                    )
                )
    else:
        raise ParameterError(f"unknown cloud format {format!r}")
