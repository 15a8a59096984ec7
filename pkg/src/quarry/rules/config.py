"""Rule configuration: the function-name sets the detectors key on."""

from __future__ import annotations

from dataclasses import dataclass

from quarry.engine.memflow import MemPolicy

DEFAULT_ALLOCATORS = frozenset({"malloc", "calloc", "realloc"})
DEFAULT_DEALLOCATORS = frozenset({"free"})
DEFAULT_SOURCES = frozenset({"input", "gets", "recv"})
DEFAULT_SINKS = frozenset({"exec", "system"})


@dataclass(frozen=True)
class RuleConfig:
    allocators: frozenset[str] = DEFAULT_ALLOCATORS
    deallocators: frozenset[str] = DEFAULT_DEALLOCATORS
    sources: frozenset[str] = DEFAULT_SOURCES
    sinks: frozenset[str] = DEFAULT_SINKS
    sanitizers: frozenset[str] = frozenset()
    optimistic_externals: bool = True

    def __post_init__(self):
        if self.allocators & self.deallocators:
            raise ValueError("allocators and deallocators must be disjoint")

    def mem_policy(self) -> MemPolicy:
        return MemPolicy(
            allocators=frozenset(self.allocators),
            deallocators=frozenset(self.deallocators),
            optimistic_externals=self.optimistic_externals,
        )

    @classmethod
    def from_mapping(cls, data: dict) -> "RuleConfig":
        kwargs = {}
        for name in ("allocators", "deallocators", "sources", "sinks", "sanitizers"):
            if name in data:
                kwargs[name] = frozenset(data[name])
        if "optimistic_externals" in data:
            kwargs["optimistic_externals"] = bool(data["optimistic_externals"])
        return cls(**kwargs)
