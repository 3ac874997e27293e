"""
Cache Manager for reduction results
In-memory, thread-safe LRU memo keyed by hashable terms
"""

import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable, Dict, Hashable, Optional

from config import Config

logger = logging.getLogger(__name__)

_MISSING = object()


@dataclass
class CacheEntry:
    """Cache entry with metadata"""
    key: Hashable
    value: Any
    hits: int = 0
    source: str = "unknown"


class LRUCache:
    """Thread-safe LRU cache implementation"""

    def __init__(self, max_size: int = 1000):
        self.max_size = max_size
        self.cache: "OrderedDict[Hashable, CacheEntry]" = OrderedDict()
        self.lock = threading.RLock()
        self.stats = {
            'hits': 0,
            'misses': 0,
            'evictions': 0,
            'total_requests': 0
        }

    def get(self, key: Hashable, default: Any = None) -> Any:
        """Get value from cache"""
        with self.lock:
            self.stats['total_requests'] += 1

            entry = self.cache.get(key)
            if entry is None:
                self.stats['misses'] += 1
                return default

            # Move to end (most recently used)
            self.cache.move_to_end(key)
            entry.hits += 1
            self.stats['hits'] += 1

            return entry.value

    def set(self, key: Hashable, value: Any, source: str = "unknown"):
        """Set value in cache"""
        with self.lock:
            if key in self.cache:
                del self.cache[key]

            self.cache[key] = CacheEntry(key=key, value=value, source=source)

            # Evict oldest if over capacity
            while len(self.cache) > self.max_size:
                evicted_key = next(iter(self.cache))
                del self.cache[evicted_key]
                self.stats['evictions'] += 1

    def clear(self):
        """Clear all cache entries"""
        with self.lock:
            self.cache.clear()

    def get_stats(self) -> Dict:
        """Get cache statistics"""
        with self.lock:
            hit_rate = (self.stats['hits'] / self.stats['total_requests'] * 100
                        if self.stats['total_requests'] > 0 else 0)
            return {
                **self.stats,
                'hit_rate': f"{hit_rate:.2f}%",
                'size': len(self.cache),
                'max_size': self.max_size
            }

    def __len__(self) -> int:
        return len(self.cache)


def cached(cache: LRUCache, key_func: Callable[..., Optional[Hashable]], source: str = "unknown"):
    """Memoize a function in `cache`; a key of None bypasses the cache"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            if not Config.ENABLE_CACHE:
                return func(*args, **kwargs)
            key = key_func(*args, **kwargs)
            if key is None:
                return func(*args, **kwargs)
            value = cache.get(key, _MISSING)
            if value is not _MISSING:
                logger.debug(f"Cache hit in {func.__name__}")
                return value
            value = func(*args, **kwargs)
            cache.set(key, value, source=source)
            return value
        return wrapper
    return decorator
