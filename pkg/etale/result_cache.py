"""
Result Cache Service

JSON-lines cache of Kim scan records, keyed by a content hash of
(poly, n, v, seed, version). Lets a rerun of a scan skip finished jobs.
"""

import hashlib
import json
import os
import threading
from typing import Dict, Optional, Tuple
import logging

logger = logging.getLogger(__name__)

_lock = threading.Lock()

# path -> ((mtime_ns, size), records); guarded by _lock
_loaded: Dict[str, Tuple[Tuple[int, int], Dict[str, Dict]]] = {}


def cache_key(poly: str, n: int, v, seed: int, version: str) -> str:
    payload = json.dumps({"poly": poly, "n": str(n), "v": v, "seed": str(seed), "version": version},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _load(path: str) -> Dict[str, Dict]:
    records: Dict[str, Dict] = {}
    if not path or not os.path.exists(path):
        return records
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                records[entry["key"]] = entry["record"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                logger.warning(f"Skipping malformed cache line {lineno} in {path}: {e}")
    return records


def _signature(path: str) -> Optional[Tuple[int, int]]:
    try:
        st = os.stat(path)
    except FileNotFoundError:
        return None
    return st.st_mtime_ns, st.st_size


def _records(path: str) -> Dict[str, Dict]:
    """Parsed cache file, re-read only when its mtime or size changed. Call with _lock held."""
    signature = _signature(path)
    if signature is None:
        _loaded.pop(path, None)
        return {}
    memo = _loaded.get(path)
    if memo is not None and memo[0] == signature:
        return memo[1]
    records = _load(path)
    _loaded[path] = (signature, records)
    return records


def get_cached_record(path: Optional[str], key: str) -> Optional[Dict]:
    """
    Get a cached record.

    Args:
        path: Cache file (None disables the cache)
        key: Content hash from cache_key

    Returns:
        The stored record or None if absent
    """
    if not path:
        return None
    try:
        with _lock:
            record = _records(path).get(key)
        if record is not None:
            logger.debug(f"Cache hit for {key[:12]}")
        return record
    except OSError as e:
        logger.error(f"Error reading result cache {path}: {e}")
        return None


def update_cache(path: Optional[str], key: str, record: Dict) -> bool:
    """Append a record; returns True if it was written."""
    if not path:
        return False
    line = json.dumps({"key": key, "record": record}, sort_keys=True, ensure_ascii=False)
    try:
        with _lock:
            before = _signature(path)
            with open(path, "a", encoding="utf-8") as f:
                f.write(line + "\n")
            memo = _loaded.get(path)
            if memo is not None and memo[0] == before:
                memo[1][key] = json.loads(line)["record"]
                _loaded[path] = (_signature(path), memo[1])
        logger.debug(f"Cached record {key[:12]}")
        return True
    except OSError as e:
        logger.error(f"Error updating result cache {path}: {e}")
        return False


def get_cache_stats(path: Optional[str]) -> Dict:
    if not path or not os.path.exists(path):
        return {"path": path, "records": 0, "vanishing": 0, "errors": 0}
    with _lock:
        records = _records(path)
    return {
        "path": path,
        "records": len(records),
        "vanishing": sum(1 for r in records.values() if r.get("vanishes") is True),
        "errors": sum(1 for r in records.values() if "error" in r),
    }
