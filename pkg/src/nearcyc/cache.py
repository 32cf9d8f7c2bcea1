"""Checksummed on-disk cache for field and near-field tables.

Each entry is one file: a first line ``NEARCYC-TABLES <sha256>`` followed by
the payload, which is a JSON header describing the arrays and then their raw
little-endian bytes.  A missing, truncated or tampered file is treated as a
miss and the tables are recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .finite_field import FiniteField, make_field
from .nearfield import DicksonNearField, MultGroup, construct_nearfield

ENV_VAR = "NEARCYC_CACHE_DIR"
MAGIC = b"NEARCYC-TABLES"


class CacheError(OSError):
    pass


def resolve_cache_dir(flag: str | None = None) -> Path | None:
    """The command-line flag wins over the environment variable; None means
    caching is off."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def encode_payload(arrays: dict[str, np.ndarray]) -> bytes:
    header = []
    blobs = []
    offset = 0
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name], dtype=np.asarray(arrays[name]).dtype.newbyteorder("<"))
        raw = a.tobytes()
        header.append({"name": name, "dtype": a.dtype.str, "shape": list(a.shape), "offset": offset, "nbytes": len(raw)})
        blobs.append(raw)
        offset += len(raw)
    head = json.dumps(header, sort_keys=True).encode()
    return len(head).to_bytes(8, "little") + head + b"".join(blobs)


def decode_payload(payload: bytes) -> dict[str, np.ndarray]:
    n = int.from_bytes(payload[:8], "little")
    header = json.loads(payload[8 : 8 + n])
    body = payload[8 + n :]
    out = {}
    for h in header:
        raw = body[h["offset"] : h["offset"] + h["nbytes"]]
        if len(raw) != h["nbytes"]:
            raise ValueError("truncated payload")
        out[h["name"]] = np.frombuffer(raw, dtype=np.dtype(h["dtype"])).reshape(h["shape"]).copy()
    return out


@dataclass(frozen=True)
class CacheEntry:
    key: str
    payload: bytes
    checksum: str

    @classmethod
    def from_arrays(cls, key: str, arrays: dict[str, np.ndarray]) -> "CacheEntry":
        payload = encode_payload(arrays)
        return cls(key, payload, hashlib.sha256(payload).hexdigest())

    def arrays(self) -> dict[str, np.ndarray]:
        return decode_payload(self.payload)


class TableCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.tables"

    def save(self, entry: CacheEntry) -> Path:
        path = self.path(entry.key)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            with open(tmp, "wb") as fh:
                fh.write(MAGIC + b" " + entry.checksum.encode() + b"\n")
                fh.write(entry.payload)
            os.replace(tmp, path)
        except OSError as exc:
            raise CacheError(f"cannot write cache file {path}: {exc}") from exc
        return path

    def load(self, key: str) -> CacheEntry | None:
        """The stored entry, or None when missing or failing its checksum."""
        path = self.path(key)
        if not path.exists():
            return None
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise CacheError(f"cannot read cache file {path}: {exc}") from exc
        line, _, payload = data.partition(b"\n")
        parts = line.split(b" ")
        if len(parts) != 2 or parts[0] != MAGIC:
            return None
        checksum = parts[1].decode(errors="replace")
        if hashlib.sha256(payload).hexdigest() != checksum:
            return None
        return CacheEntry(key, payload, checksum)

    def get_or_compute(self, key: str, compute: Callable[[], dict[str, np.ndarray]]) -> dict[str, np.ndarray]:
        entry = self.load(key)
        if entry is not None:
            try:
                arrays = entry.arrays()
                self.hits += 1
                return arrays
            except (ValueError, KeyError):
                pass
        self.misses += 1
        entry = CacheEntry.from_arrays(key, compute())
        self.save(entry)
        return entry.arrays()


def cache_roundtrip(cache: TableCache, entry: CacheEntry) -> bool:
    """Save then load; True when the payload comes back byte for byte."""
    cache.save(entry)
    back = cache.load(entry.key)
    return back is not None and back.payload == entry.payload and back.checksum == entry.checksum


def field_key(p: int, e: int) -> str:
    return f"field-{p}-{e}"


def nearfield_key(q: int, n: int, variant: int) -> str:
    return f"nearfield-{q}-{n}-{variant}"


def _field_arrays(F: FiniteField) -> dict[str, np.ndarray]:
    return {
        "exp": F.exp,
        "log": F.log,
        "modulus": np.array(F.modulus, dtype=np.int64),
        "generator": np.array([F.generator], dtype=np.int64),
    }


def cached_field(p: int, e: int, cache: TableCache | None) -> FiniteField:
    if cache is None:
        return make_field(p, e)
    arr = cache.get_or_compute(field_key(p, e), lambda: _field_arrays(make_field(p, e)))
    exp, log = arr["exp"], arr["log"]
    exp.setflags(write=False)
    log.setflags(write=False)
    return FiniteField(p, e, tuple(int(c) for c in arr["modulus"]), int(arr["generator"][0]), exp, log)


def cached_nearfield(q: int, n: int, variant: int, cache: TableCache | None) -> DicksonNearField:
    nf = construct_nearfield(q, n, variant)
    if cache is None:
        return nf
    F = cached_field(nf.p, nf.dimension, cache)
    nf = DicksonNearField(pair=nf.pair, field=F, variant=nf.variant, unit=nf.unit, coupling=nf.coupling)
    arr = cache.get_or_compute(
        nearfield_key(q, n, variant), lambda: {"table": nf.mult_group.table, "labels": nf.mult_group.labels}
    )
    # cached_property stores into the instance dict, which a frozen dataclass allows
    nf.__dict__["mult_group"] = MultGroup(labels=arr["labels"], table=arr["table"])
    return nf
