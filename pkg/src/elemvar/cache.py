"""Persistent plane-set cache: versioned JSON header plus digit lines.

Each file stores one enumerated point set.  Line 1 is a JSON header; every
following line encodes one plane's canonical basis in column-major base-p
digits (k digits per entry), using the alphabet 0-9a-c.  Reload rebuilds a
point set that compares equal byte for byte, and entries written under a
different schema version are rejected.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

import numpy as np

from .evariety import EPointSet
from .fq import FqContext, SubspaceBasis

SCHEMA = 1
_ALPHABET = "0123456789abc"
_DT = np.int64


def cache_dir() -> Path:
    override = os.environ.get("ELEMVAR_CACHE_DIR")
    if override:
        return Path(override)
    return Path.home() / ".cache" / "elemvar"


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-")


def cache_path(algebra_name: str, r: int, p: int, k: int,
               strategy: str) -> Path:
    stem = f"{_slug(algebra_name)}-p{p}k{k}-r{r}-{_slug(strategy)}"
    return cache_dir() / f"{stem}.planes"


def encode_plane(plane: SubspaceBasis) -> str:
    ctx = plane.ctx
    codes = plane.basis.a.T.reshape(-1)
    digits = ctx.digits(codes)  # shape (k, n*r)
    flat = digits.T.reshape(-1)
    return "".join(_ALPHABET[int(d)] for d in flat)


def decode_plane(ctx: FqContext, line: str, n: int, r: int) -> SubspaceBasis:
    k = ctx.k
    if len(line) != n * r * k:
        raise ValueError(f"plane line has {len(line)} digits, want {n * r * k}")
    flat = np.array([_ALPHABET.index(ch) for ch in line], dtype=_DT)
    digits = flat.reshape(n * r, k).T
    codes = ctx.from_digits(digits)
    cols = np.asarray(codes, dtype=_DT).reshape(r, n).T
    return SubspaceBasis.span(ctx, cols)


def save_points(pts: EPointSet, path: Path | None = None) -> Path:
    if path is None:
        path = cache_path(pts.algebra_name, pts.r, pts.p, pts.k, pts.strategy)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "schema": SCHEMA,
        "family": pts.algebra_name,
        "n": pts.ambient_dim,
        "r": pts.r,
        "p": pts.p,
        "k": pts.k,
        "kind": "elementary-planes",
        "count": len(pts),
        "complete": pts.complete,
        "strategy": pts.strategy,
    }
    lines = [json.dumps(header, sort_keys=True)]
    lines.extend(encode_plane(pl) for pl in pts.planes)
    path.write_text("\n".join(lines) + "\n")
    return path


def load_points(path: Path) -> EPointSet:
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    if header.get("schema") != SCHEMA:
        raise ValueError(f"cache schema {header.get('schema')} not supported")
    ctx = FqContext(header["p"], header["k"])
    n, r = header["n"], header["r"]
    planes = tuple(decode_plane(ctx, line, n, r) for line in lines[1:] if line)
    if len(planes) != header["count"]:
        raise ValueError("cache count disagrees with stored lines")
    return EPointSet(header["family"], n, r, header["p"], header["k"],
                     planes, header["strategy"], header["complete"])


def lookup(algebra_name: str, r: int, p: int, k: int,
           strategy: str) -> EPointSet | None:
    path = cache_path(algebra_name, r, p, k, strategy)
    if not path.is_file():
        return None
    try:
        return load_points(path)
    except (ValueError, KeyError, json.JSONDecodeError):
        return None


def list_entries() -> list[dict]:
    root = cache_dir()
    if not root.is_dir():
        return []
    out = []
    for path in sorted(root.glob("*.planes")):
        try:
            with path.open() as fh:
                header = json.loads(fh.readline())
        except (OSError, json.JSONDecodeError):
            continue
        header["file"] = path.name
        out.append(header)
    return out


def clear_entries() -> int:
    root = cache_dir()
    if not root.is_dir():
        return 0
    removed = 0
    for path in root.glob("*.planes"):
        path.unlink()
        removed += 1
    return removed
