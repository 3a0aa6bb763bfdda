"""On-disk memo of q-expansions in a line-oriented text format.

Layout::

    MOCKMODQ v1
    form=r-p params=p=3 ring=padic(3,24) minexp=-3 prec=8721 checksum=<sha256>
    -3 -11:1:24
    ...

The checksum covers the coefficient lines, so a reread reproduces the
stored series exactly or fails loudly.
"""
from __future__ import annotations

import hashlib
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .coeffring import PadicScaled, decode_rational, encode_rational
from .qseries import PadicRing, QSeries, parse_ring

MAGIC = "MOCKMODQ"
VERSION = 1
HEADER = f"{MAGIC} v{VERSION}"


class CacheError(Exception):
    """A cache file is unreadable: wrong version, truncated or corrupted."""


def format_params(params: dict) -> str:
    if not params:
        return "-"
    return ",".join(f"{k}={params[k]}" for k in sorted(params))


def parse_params(text: str) -> dict:
    if text == "-":
        return {}
    out = {}
    for item in text.split(","):
        k, _, v = item.partition("=")
        out[k] = int(v)
    return out


@dataclass(frozen=True)
class CacheEntry:
    form_id: str
    params: dict
    series: QSeries

    @property
    def ring(self):
        return self.series.ring

    def coefficient_lines(self) -> list[str]:
        s = self.series
        lines = []
        for n in range(s.min_exp, s.prec_bound):
            c = s.coeff(n)
            text = c.encode() if isinstance(c, PadicScaled) else encode_rational(c)
            lines.append(f"{n} {text}")
        return lines

    def dumps(self) -> str:
        body = "\n".join(self.coefficient_lines())
        digest = hashlib.sha256(body.encode()).hexdigest()
        meta = (f"form={self.form_id} params={format_params(self.params)} ring={self.ring} "
                f"minexp={self.series.min_exp} prec={self.series.prec_bound} checksum={digest}")
        return f"{HEADER}\n{meta}\n{body}\n"


def _file_name(form_id: str, params: dict, ring) -> str:
    raw = f"{form_id}_{format_params(params)}_{ring}"
    return re.sub(r"[^A-Za-z0-9_.=-]", "_", raw) + ".q"


def cache_path(cache_dir, form_id: str, params: dict, ring) -> Path:
    return Path(cache_dir) / _file_name(form_id, params, ring)


def cache_write(cache_dir, entry: CacheEntry) -> Path:
    """Write ``entry`` atomically: temp file in the same directory, then rename."""
    if entry.series.prec_bound <= entry.series.min_exp:
        raise ValueError("refusing to cache an empty window")
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    target = cache_path(cache_dir, entry.form_id, entry.params, entry.ring)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-", suffix=".q")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(entry.dumps())
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def loads(text: str) -> CacheEntry:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MAGIC):
        raise CacheError("not a cache file")
    if lines[0] != HEADER:
        raise CacheError(f"unsupported cache version {lines[0]!r}, expected {HEADER!r}")
    if len(lines) < 2:
        raise CacheError("truncated cache file: no metadata")
    try:
        meta = dict(field.split("=", 1) for field in lines[1].split(" "))
        ring = parse_ring(meta["ring"])
        lo, hi = int(meta["minexp"]), int(meta["prec"])
        form_id, params, digest = meta["form"], parse_params(meta["params"]), meta["checksum"]
    except (KeyError, ValueError) as exc:
        raise CacheError(f"bad metadata line: {exc}") from None
    body = lines[2:]
    if len(body) != hi - lo:
        raise CacheError(f"truncated cache file: {len(body)} of {hi - lo} coefficient lines")
    if hashlib.sha256("\n".join(body).encode()).hexdigest() != digest:
        raise CacheError("checksum mismatch")
    values = []
    for expected, line in enumerate(body, start=lo):
        exp, _, text = line.partition(" ")
        if int(exp) != expected:
            raise CacheError(f"coefficient line for q^{exp} where q^{expected} was expected")
        if isinstance(ring, PadicRing):
            values.append(PadicScaled.decode(text, ring.p))
        else:
            values.append(decode_rational(text))
    if isinstance(ring, PadicRing):
        series = QSeries.from_padics(ring, lo, values)
    else:
        series = QSeries.from_rationals(ring, lo, values)
    return CacheEntry(form_id, params, series)


def cache_read(cache_dir, form_id: str, params: dict, ring,
               prec_bound: Optional[int] = None) -> Optional[CacheEntry]:
    """The cached entry, truncated to ``prec_bound``; None when absent or too short.

    Corrupted files raise CacheError.
    """
    path = cache_path(cache_dir, form_id, params, ring)
    if not path.exists():
        return None
    entry = loads(path.read_text(encoding="ascii"))
    if entry.form_id != form_id or entry.params != params or str(entry.ring) != str(ring):
        raise CacheError(f"{path.name} describes a different expansion")
    if prec_bound is None:
        return entry
    if entry.series.prec_bound < prec_bound:
        return None
    return CacheEntry(form_id, params, entry.series.truncate(prec_bound))
