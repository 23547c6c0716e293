"""
Corpus scanner: Kim jobs over a range of imaginary quadratic discriminants.

Records are produced in input order (descending discriminant, then the job
order of kim_jobs_for_discriminant), so identical settings give identical output.
Per-job failures are recorded, never raised.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Optional, Tuple
import logging

from config import SolverConfig, resolve_config
from errors import MathematicalError, UsageError
from forms import fundamental_discriminants
from kim import KimJob, kim_invariant, kim_jobs_for_discriminant
from result_cache import cache_key, get_cached_record, update_cache

logger = logging.getLogger(__name__)


def parse_disc_range(text: str) -> Tuple[int, int]:
    """'a..b' -> (min, max)."""
    try:
        lo, hi = (int(part) for part in text.split(".."))
    except ValueError:
        raise UsageError(f"discriminant range must look like a..b, got {text!r}")
    return min(lo, hi), max(lo, hi)


def _run_job(job: KimJob, verify: bool, seed: int, cfg: SolverConfig) -> Dict:
    try:
        return kim_invariant(job, verify, seed, cfg).to_record(include_timing=False)
    except MathematicalError as e:
        logger.error(f"Kim job {job.poly}, v={job.v} failed: {e}")
        return {**job.key_parts(), "error": type(e).__name__, "message": str(e)}


def scan(disc_range: Tuple[int, int], n: int = 2, cache_path: Optional[str] = None,
         config: Optional[SolverConfig] = None) -> Iterator[Dict]:
    """Yield one record per admissible job, skipping recomputation for cache hits."""
    cfg = resolve_config(config)
    seed = cfg.seed
    verify = bool(cfg.get("scan", "verify_norm_image"))
    workers = max(1, int(cfg.get("scan", "workers")))
    lo, hi = disc_range

    for D in fundamental_discriminants(lo, hi):
        try:
            jobs = kim_jobs_for_discriminant(D, n, cfg)
        except MathematicalError as e:
            logger.error(f"Jobs for D={D} unavailable: {e}")
            yield {"discriminant": str(D), "n": str(n), "error": type(e).__name__, "message": str(e)}
            continue

        keys = [cache_key(j.poly, n, j.v.to_json(), seed, cfg.version) for j in jobs]
        results: List[Optional[Dict]] = [get_cached_record(cache_path, k) for k in keys]
        pending = [i for i, r in enumerate(results) if r is None]
        if pending:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                computed = list(pool.map(lambda i: _run_job(jobs[i], verify, seed, cfg), pending))
            for i, record in zip(pending, computed):
                record = {"discriminant": str(D), **record}
                results[i] = record
                update_cache(cache_path, keys[i], record)
        for record in results:
            yield record


def write_jsonl(records: Iterator[Dict], stream) -> int:
    count = 0
    for record in records:
        stream.write(json.dumps(record, sort_keys=True) + "\n")
        count += 1
    return count
