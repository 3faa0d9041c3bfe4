"""Append-only on-disk cache of exact counts.

One header line, then one tab-separated line per entry:

    variant  n  kparam  count  checksum

where checksum is the first 16 hex digits of sha256 over the other four
fields joined by tabs.  kparam is "-" when unused.  Any line whose checksum
does not match makes the whole read fail.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

__all__ = ["CacheCorruption", "CountCache", "default_cache_path"]

HEADER = "# coprimeperm count cache v1"
ENV_VAR = "COPRIMEPERM_CACHE"


class CacheCorruption(RuntimeError):
    pass


def default_cache_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "coprimeperm" / "counts.tsv"


def _checksum(fields: list[str]) -> str:
    return hashlib.sha256("\t".join(fields).encode()).hexdigest()[:16]


def _key(variant: str, n: int, kparam: int | None) -> tuple[str, int, int | None]:
    return (variant, int(n), None if kparam is None else int(kparam))


class CountCache:
    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else default_cache_path()

    def read(self) -> dict[tuple[str, int, int | None], int]:
        if not self.path.exists():
            return {}
        lines = self.path.read_text().splitlines()
        if not lines or lines[0] != HEADER:
            raise CacheCorruption(f"{self.path}: missing or unknown header")
        out = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 5 or _checksum(fields[:4]) != fields[4]:
                raise CacheCorruption(f"{self.path}:{lineno}: checksum mismatch")
            variant, n, kparam, value = fields[:4]
            try:
                key = _key(variant, int(n), None if kparam == "-" else int(kparam))
                count = int(value)
            except ValueError:
                raise CacheCorruption(f"{self.path}:{lineno}: malformed fields") from None
            if key in out and out[key] != count:
                raise CacheCorruption(f"{self.path}:{lineno}: conflicting entries for {key}")
            out[key] = count
        return out

    def get(self, variant: str, n: int, kparam: int | None = None) -> int | None:
        return self.read().get(_key(variant, n, kparam))

    def put(self, variant: str, n: int, kparam: int | None, value: int) -> bool:
        """Append an entry unless already present; returns True if written."""
        entries = self.read()
        key = _key(variant, n, kparam)
        if key in entries:
            if entries[key] != value:
                raise CacheCorruption(f"cached {key} = {entries[key]} disagrees with {value}")
            return False
        fields = [variant, str(n), "-" if kparam is None else str(kparam), str(value)]
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new = not self.path.exists()
        with self.path.open("a") as fh:
            if new:
                fh.write(HEADER + "\n")
            fh.write("\t".join(fields + [_checksum(fields)]) + "\n")
        return True
