"""Exact commuting-pair counts by enumeration over F_q vectors."""
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from tqdm import tqdm

from radcount.config import MAX_BUDGET, settings
from radcount.graph.quiver import Quiver, SummandVector
from radcount.schemas.errors import BudgetExceededError, InvalidRequestError
from radcount.schemas.responses import CountResult
from radcount.services.finite_field import batch_nullity, make_field
from radcount.services.path_algebra import (
    AdjointStencil,
    StructureConstants,
    build_basis,
    lower_depth_indices,
    radical_power_indices,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Enumeration:
    """Everything a worker needs to turn a range of x vectors into a nullity histogram."""

    q: int
    width: int
    domain_dim: int
    plus: np.ndarray
    minus: np.ndarray


# (segment, lo, hi): segment -1 enumerates all vectors, segment t >= 0 the
# projective representatives whose first nonzero coordinate is t.
Chunk = tuple[int, int, int]

_WORKER_JOB: Optional[_Enumeration] = None


def _digit_block(q: int, lo: int, hi: int, width: int) -> np.ndarray:
    """Rows are the base-q digits of lo..hi-1, least significant first."""
    ns = np.arange(lo, hi, dtype=np.int64)
    if width == 0:
        return np.zeros((len(ns), 0), dtype=np.uint8)
    powers = q ** np.arange(width, dtype=np.int64)
    return ((ns[:, None] // powers[None, :]) % q).astype(np.uint8)


def _vectors(job: _Enumeration, chunk: Chunk) -> np.ndarray:
    segment, lo, hi = chunk
    if segment < 0:
        return _digit_block(job.q, lo, hi, job.width)
    xs = np.zeros((hi - lo, job.width), dtype=np.uint8)
    xs[:, segment] = 1
    xs[:, segment + 1:] = _digit_block(job.q, lo, hi, job.width - segment - 1)
    return xs


def _chunk_histogram(job: _Enumeration, chunk: Chunk) -> np.ndarray:
    field = make_field(job.q)
    xs = _vectors(job, chunk)
    padded = np.concatenate([xs, np.zeros((xs.shape[0], 1), dtype=np.uint8)], axis=1)
    mats = field.sub[padded[:, job.plus], padded[:, job.minus]]
    nullities = batch_nullity(field, mats)
    return np.bincount(nullities, minlength=job.domain_dim + 1)


def _init_worker(job: _Enumeration) -> None:
    global _WORKER_JOB
    _WORKER_JOB = job


def _pool_chunk_histogram(chunk: Chunk) -> np.ndarray:
    return _chunk_histogram(_WORKER_JOB, chunk)


class PairCounter:
    """Fibered counter: #{(x, y) : xy = yx} = sum over x of q^nullity(ad_x).

    Scaling x by a nonzero scalar does not change the kernel of ad_x, so only
    projective representatives (first nonzero coordinate 1) are enumerated
    and weighted by q - 1.
    """

    def __init__(
        self,
        budget: Optional[int] = None,
        jobs: Optional[int] = None,
        chunk_size: Optional[int] = None,
        path_cap: Optional[int] = None,
    ):
        self.budget = settings.budget if budget is None else budget
        self.jobs = settings.jobs if jobs is None else jobs
        self.chunk_size = settings.chunk_size if chunk_size is None else chunk_size
        self.path_cap = settings.path_cap if path_cap is None else path_cap
        self.progress_interval = settings.progress_interval

        if not 1 <= self.budget <= MAX_BUDGET:
            raise InvalidRequestError(f"budget must lie between 1 and 2**62, got {self.budget}")
        for name in ("jobs", "chunk_size", "path_cap"):
            if getattr(self, name) < 1:
                raise InvalidRequestError(f"{name} must be at least 1, got {getattr(self, name)}")

    def _check_budget(self, q: int, width: int, what: str = "q^D") -> None:
        required = q**width
        if required > self.budget:
            raise BudgetExceededError(required, self.budget, what=what)

    def _chunks(self, q: int, width: int, projective: bool) -> list[Chunk]:
        chunks = []
        segments = range(width) if projective else [-1]
        for segment in segments:
            total = q ** (width - segment - 1) if segment >= 0 else q**width
            for lo in range(0, total, self.chunk_size):
                chunks.append((segment, lo, min(total, lo + self.chunk_size)))
        return chunks

    def _histogram(self, job: _Enumeration, chunks: list[Chunk]) -> np.ndarray:
        total = sum(hi - lo for _, lo, hi in chunks)
        histogram = np.zeros(job.domain_dim + 1, dtype=np.int64)
        progress = tqdm(
            total=total,
            unit="x",
            file=sys.stderr,
            mininterval=self.progress_interval,
            disable=None,
            leave=False,
        )
        with progress:
            if self.jobs > 1 and total > self.chunk_size:
                with ProcessPoolExecutor(
                    max_workers=self.jobs, initializer=_init_worker, initargs=(job,)
                ) as executor:
                    for chunk, part in zip(chunks, executor.map(_pool_chunk_histogram, chunks)):
                        histogram += part
                        progress.update(chunk[2] - chunk[1])
            else:
                for chunk in chunks:
                    histogram += _chunk_histogram(job, chunk)
                    progress.update(chunk[2] - chunk[1])
        return histogram

    def fibered_sum(
        self,
        q: int,
        sc: StructureConstants,
        support: list[int],
        domain: list[int],
        codomain: list[int],
        projective: bool = True,
    ) -> int:
        """Sum over x in span(support) of q^nullity(ad_x: span(domain) -> span(codomain)).

        Raises:
            BudgetExceededError: q^len(support) exceeds the budget.
        """
        width = len(support)
        self._check_budget(q, width)
        if width == 0:
            return q ** len(domain)

        stencil = AdjointStencil.build(sc, support, domain, codomain)
        job = _Enumeration(q, width, len(domain), stencil.plus, stencil.minus)
        histogram = self._histogram(job, self._chunks(q, width, projective))
        weighted = sum(int(count) * q**n for n, count in enumerate(histogram))
        if projective:
            return q ** len(domain) + (q - 1) * weighted
        return weighted

    def count_commuting(
        self, quiver: Quiver, d: SummandVector, q: int, projective: bool = True
    ) -> CountResult:
        """Number of commuting pairs in rad A_{Q,d} x rad A_{Q,d}."""
        start = time.perf_counter()
        make_field(q)
        _, basis = build_basis(quiver, d, include_constants=False, path_cap=self.path_cap)
        sc = StructureConstants.build(basis)
        indices = list(range(basis.dim))
        value = self.fibered_sum(q, sc, indices, indices, indices, projective=projective)
        return self._result(value, q, basis.dim, "radical", start)

    def count_overline(
        self, quiver: Quiver, d: SummandVector, q: int, projective: bool = True
    ) -> CountResult:
        """Number of commuting pairs in A_{Q,d} x rad A_{Q,d}."""
        start = time.perf_counter()
        make_field(q)
        _, basis = build_basis(quiver, d, include_constants=True, path_cap=self.path_cap)
        sc = StructureConstants.build(basis)
        radical = basis.non_constant_indices()
        value = self.fibered_sum(
            q, sc, radical, list(range(basis.dim)), radical, projective=projective
        )
        return self._result(value, q, len(radical), "overline", start)

    def count_weakened(
        self, quiver: Quiver, d: SummandVector, l: int, m: int, q: int, projective: bool = True
    ) -> CountResult:
        """Pairs (x, y) in rad^l x rad^l with xy - yx in rad^m."""
        if l < 1 or m < 0:
            raise InvalidRequestError(f"weakened count needs l >= 1 and m >= 0, got l={l}, m={m}")
        start = time.perf_counter()
        make_field(q)
        _, basis = build_basis(quiver, d, include_constants=False, path_cap=self.path_cap)
        sc = StructureConstants.build(basis)
        power = radical_power_indices(basis, l)
        quotient = lower_depth_indices(basis, m)
        value = self.fibered_sum(q, sc, power, power, quotient, projective=projective)
        result = self._result(value, q, len(power), "weakened", start)
        return result.model_copy(update={"l": l, "m": m})

    def naive_pair_count(
        self,
        quiver: Quiver,
        d: SummandVector,
        q: int,
        mode: str = "radical",
        l: Optional[int] = None,
        m: Optional[int] = None,
    ) -> CountResult:
        """Enumerate every pair and test the commutator directly; an oracle for tiny instances."""
        start = time.perf_counter()
        field = make_field(q)
        include_constants = mode == "overline"
        _, basis = build_basis(quiver, d, include_constants, path_cap=self.path_cap)
        sc = StructureConstants.build(basis)

        if mode == "radical":
            left = right = list(range(basis.dim))
            checked = left
        elif mode == "overline":
            left = list(range(basis.dim))
            right = basis.non_constant_indices()
            checked = left
        elif mode == "weakened":
            if l is None or m is None:
                raise InvalidRequestError("naive weakened count needs l and m")
            left = right = radical_power_indices(basis, l)
            checked = lower_depth_indices(basis, m)
        else:
            raise InvalidRequestError(f"unknown counting mode '{mode}'")

        self._check_budget(q, len(left) + len(right), what="q^(pair space)")
        xs = np.zeros((q ** len(left), basis.dim), dtype=np.uint8)
        xs[:, left] = _digit_block(q, 0, q ** len(left), len(left))
        ys = np.zeros((q ** len(right), basis.dim), dtype=np.uint8)
        ys[:, right] = _digit_block(q, 0, q ** len(right), len(right))

        add, sub, mul = field.add, field.sub, field.mul
        value = 0
        for y in ys:
            commutator = np.zeros_like(xs)
            for (a, b), c in sc.table.items():
                if y[b]:
                    commutator[:, c] = add[commutator[:, c], mul[xs[:, a], y[b]]]
                if y[a]:
                    commutator[:, c] = sub[commutator[:, c], mul[y[a], xs[:, b]]]
            value += int(np.count_nonzero(~commutator[:, checked].any(axis=1)))

        result = self._result(value, q, len(left) + len(right), "naive", start)
        return result.model_copy(update={"l": l, "m": m, "engine": "naive"})

    def count(
        self,
        quiver: Quiver,
        d: SummandVector,
        q: int,
        mode: str = "radical",
        l: Optional[int] = None,
        m: Optional[int] = None,
    ) -> CountResult:
        """Dispatch on counting mode."""
        if mode == "radical":
            return self.count_commuting(quiver, d, q)
        if mode == "overline":
            return self.count_overline(quiver, d, q)
        if mode == "weakened":
            return self.count_weakened(quiver, d, l, m, q)
        raise InvalidRequestError(f"unknown counting mode '{mode}'")

    def _result(self, value: int, q: int, dim: int, mode: str, start: float) -> CountResult:
        elapsed = time.perf_counter() - start
        logger.info(
            "Count completed",
            extra={"mode": mode, "q": q, "dim_enumerated": dim, "elapsed": round(elapsed, 3)},
        )
        return CountResult(value=value, q=q, dim_enumerated=dim, mode=mode, elapsed=elapsed)
