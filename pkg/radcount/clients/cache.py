"""Append-only JSON-lines cache of exact counts."""
import fcntl
import hashlib
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterator, Optional

from pydantic import BaseModel, Field, ValidationError

from radcount.config import settings
from radcount.graph.canonical import canonical_hash
from radcount.graph.quiver import Quiver, SummandVector, quiver_to_file
from radcount.schemas.requests import QuiverFile
from radcount.schemas.responses import CountResult

logger = logging.getLogger(__name__)


class CacheMeta(BaseModel):
    """Provenance of a cached value."""

    version: str
    timestamp: str
    elapsed: float


class CacheRecord(BaseModel):
    """One cached count; the quiver is stored so the value can be recomputed."""

    key: str
    value: str = Field(..., pattern=r"^[0-9]+$", description="Exact count, decimal")
    q: int
    mode: str
    params: Dict[str, int] = Field(default_factory=dict)
    quiver: QuiverFile
    meta: CacheMeta


def cache_key(
    quiver: Quiver, d: SummandVector, mode: str, params: Dict[str, int], q: int
) -> str:
    """sha256 over canonical_hash | mode | params | q."""
    rendered = ",".join(f"{k}={params[k]}" for k in sorted(params))
    material = f"{canonical_hash(quiver, d)}|{mode}|{rendered}|{q}"
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ResultCache:
    """Result cache at a JSON-lines path; writers hold an advisory lock while appending."""

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else settings.cache
        self.version = settings.app_version

    @property
    def enabled(self) -> bool:
        return self.path is not None

    def records(self) -> Iterator[CacheRecord]:
        """Valid records in file order; corrupt lines are skipped with a warning."""
        if not self.enabled or not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    yield CacheRecord.model_validate_json(line)
                except ValidationError as e:
                    logger.warning(
                        "Skipping corrupt cache line",
                        extra={"path": str(self.path), "line": line_number, "error": str(e)},
                    )

    def get(self, key: str) -> Optional[CacheRecord]:
        """Latest record stored under key, or None."""
        found = None
        for record in self.records():
            if record.key == key:
                found = record
        logger.debug("Cache lookup", extra={"key": key, "hit": found is not None})
        return found

    def put(
        self,
        quiver: Quiver,
        d: SummandVector,
        result: CountResult,
        params: Optional[Dict[str, int]] = None,
    ) -> Optional[CacheRecord]:
        """Append a record for result; a no-op when caching is disabled."""
        if not self.enabled:
            return None
        params = params or {}
        record = CacheRecord(
            key=cache_key(quiver, d, result.mode, params, result.q),
            value=str(result.value),
            q=result.q,
            mode=result.mode,
            params=params,
            quiver=quiver_to_file(quiver, d),
            meta=CacheMeta(
                version=self.version,
                timestamp=datetime.now(timezone.utc).isoformat(),
                elapsed=result.elapsed,
            ),
        )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as handle:
            fcntl.flock(handle, fcntl.LOCK_EX)
            try:
                handle.write(record.model_dump_json() + "\n")
                handle.flush()
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)
        logger.debug("Cached result", extra={"key": record.key, "mode": record.mode})
        return record
