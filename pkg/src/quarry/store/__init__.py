from quarry.store.cache import QueryCache
from quarry.store.store import GraphSnapshot, GraphStore, load, save

__all__ = ["QueryCache", "GraphSnapshot", "GraphStore", "load", "save"]
