"""LRU cache for query intermediate results.

Keys are canonical predicate text concatenated with the graph version,
so entries from a stale graph can never be served. Values are sorted
uid lists, which are deterministic for their key; concurrent writers
racing on the same key are therefore benign.
"""

from __future__ import annotations

import json
from collections import OrderedDict
from pathlib import Path

DEFAULT_CAPACITY = 4096


class QueryCache:
    def __init__(self, capacity: int = DEFAULT_CAPACITY, sidecar: Path | None = None):
        self.capacity = capacity
        self.sidecar = Path(sidecar) if sidecar else None
        self._entries: OrderedDict[str, list[int]] = OrderedDict()
        self.hit_counts: dict[str, int] = {}
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        if self.sidecar and self.sidecar.exists():
            self._load_sidecar()

    def get(self, key: str) -> list[int] | None:
        if key in self._entries:
            self._entries.move_to_end(key)
            self.hits += 1
            self.hit_counts[key] = self.hit_counts.get(key, 0) + 1
            return list(self._entries[key])
        self.misses += 1
        return None

    def put(self, key: str, value: list[int]) -> None:
        self._entries[key] = list(value)
        self._entries.move_to_end(key)
        while len(self._entries) > self.capacity:
            self._entries.popitem(last=False)
            self.evictions += 1
        if self.sidecar:
            self._write_sidecar()

    def clear(self) -> None:
        self._entries.clear()
        self.hit_counts.clear()

    def __len__(self) -> int:
        return len(self._entries)

    def _write_sidecar(self) -> None:
        payload = {key: value for key, value in self._entries.items()}
        self.sidecar.write_text(json.dumps(payload, sort_keys=True))

    def _load_sidecar(self) -> None:
        try:
            payload = json.loads(self.sidecar.read_text())
        except (OSError, json.JSONDecodeError):
            return
        for key, value in payload.items():
            self._entries[key] = [int(v) for v in value]
