"""Randomized verification suites, cache audit and failure shrinking."""
import itertools
import logging
import math
import random
from collections.abc import Callable
from typing import List, Optional

import networkx as nx

from radcount.clients.cache import ResultCache, cache_key
from radcount.config import settings
from radcount.graph import nodes
from radcount.graph.canonical import canonical_hash
from radcount.graph.graph import dispatch_count
from radcount.graph.quiver import (
    Arrow,
    Quiver,
    SummandVector,
    dump_quiver,
    quiver_from_file,
    weighted_path_count,
)
from radcount.graph.state import Instance, RuleName
from radcount.schemas.errors import BudgetExceededError, RadcountError, RuleHypothesisError
from radcount.schemas.responses import SuiteReport, TrialResult
from radcount.services.counting import PairCounter
from radcount.services.faithfulness import projection_nullity, random_single_sink_quiver
from radcount.services.finite_field import SUPPORTED_ORDERS
from radcount.services.poly_lab import fit_degree_bound, screen_conjectures
from radcount.services.unitriangular import count_conjugacy_classes_Un

logger = logging.getLogger(__name__)

# Returns a failure description, or None when the property holds.
Check = Callable[[Quiver, SummandVector], Optional[str]]

NAIVE_PAIR_LIMIT = 2**20
DEFAULT_QS = (2, 3)


def random_instance(
    rng: random.Random,
    max_vertices: int = 5,
    max_d: int = 2,
    max_rad_dim: int = 10,
    arrow_rate: float = 0.45,
    parallel_rate: float = 0.15,
) -> Instance:
    """Random acyclic quiver on "1".."n" with arrows i -> j (i < j) and dim rad <= max_rad_dim."""
    while True:
        n = rng.randint(1, max_vertices)
        vertices = tuple(str(i) for i in range(1, n + 1))
        arrows = []
        for i, j in itertools.combinations(range(1, n + 1), 2):
            if rng.random() < arrow_rate:
                copies = 2 if rng.random() < parallel_rate else 1
                for _ in range(copies):
                    arrows.append(Arrow(str(i), str(j), f"a{len(arrows)}"))
        quiver = Quiver(vertices, tuple(arrows))
        d = SummandVector({v: rng.randint(0, max_d) for v in vertices})
        if weighted_path_count(quiver, d) <= max_rad_dim:
            return quiver, d


def shrink(quiver: Quiver, d: SummandVector, check: Check) -> Instance:
    """Greedily drop vertices, drop arrows and lower d entries while the check keeps failing."""

    def still_fails(candidate: Instance) -> bool:
        try:
            return check(*candidate) is not None
        except RadcountError:
            return False

    current = (quiver, d)
    improved = True
    while improved:
        improved = False
        q_cur, d_cur = current
        candidates = []
        for v in q_cur.vertices:
            if len(q_cur.vertices) > 1:
                sub = q_cur.subquiver(u for u in q_cur.vertices if u != v)
                candidates.append((sub, d_cur.restrict(sub.vertices)))
        for arrow in q_cur.arrows:
            candidates.append((Quiver(q_cur.vertices, tuple(a for a in q_cur.arrows if a != arrow)), d_cur))
        for v in q_cur.vertices:
            if d_cur[v] > 0:
                candidates.append((q_cur, SummandVector({**d_cur, v: d_cur[v] - 1})))
        for candidate in candidates:
            if still_fails(candidate):
                current = candidate
                improved = True
                break
    return current


def _count_product(counter: PairCounter, instances: List[Instance], q: int) -> int:
    return math.prod(counter.count_commuting(qv, dv, q).value for qv, dv in instances)


class VerificationSuites:
    """Runs the named suites; every trial derives its own Random from (seed, trial)."""

    def __init__(self, counter: Optional[PairCounter] = None):
        self.counter = counter or PairCounter()

    def run(self, suite: str, trials: int, seed: int, qs: Optional[List[int]] = None) -> SuiteReport:
        """Run one suite; without qs the positivity screen samples every supported field, the others use 2 and 3."""
        if qs is None:
            qs = sorted(SUPPORTED_ORDERS) if suite == "positivity" else list(DEFAULT_QS)
        runner = {
            "ops": self.ops,
            "oracle": self.oracle,
            "burnside": self.burnside,
            "injectivity": self.injectivity,
            "positivity": self.positivity,
        }[suite]
        logger.info("Running verification suite", extra={"suite": suite, "trials": trials, "seed": seed})
        return runner(trials=trials, seed=seed, qs=qs)

    @staticmethod
    def _trial_rng(seed: int, trial: int) -> random.Random:
        return random.Random(seed * 1_000_003 + trial)

    def _finish(self, suite: str, seed: int, results: List[TrialResult], failing) -> SuiteReport:
        reproducer = None
        if failing is not None:
            instance, check, trial = failing
            small = shrink(*instance, check)
            reproducer = f"seed={seed} trial={trial} quiver={dump_quiver(*small)}"
        return SuiteReport(suite=suite, seed=seed, trials=results, reproducer=reproducer)

    def _run_checks(self, suite: str, seed: int, cases) -> SuiteReport:
        """cases yields (name, instance, check) triples."""
        results, failing = [], None
        for trial, (name, instance, check) in enumerate(cases):
            try:
                detail = check(*instance)
            except RuleHypothesisError as e:
                results.append(TrialResult(name=name, passed=True, skipped=True, detail=e.detail))
                continue
            results.append(TrialResult(name=name, passed=detail is None, detail=detail or ""))
            if detail is not None and failing is None:
                failing = (instance, check, trial)
        return self._finish(suite, seed, results, failing)

    # op invariance

    def _rule_check(self, rule: RuleName, trial_seed: int, qs: List[int]) -> Check:
        """Apply `rule` with choices drawn from Random(trial_seed); compare counts before and after."""

        def check(quiver: Quiver, d: SummandVector) -> Optional[str]:
            rng = random.Random(trial_seed)
            before, after = self._apply_random_rule(rule, rng, quiver, d)
            for q in qs:
                lhs = self.counter.count_commuting(*before, q).value
                rhs = _count_product(self.counter, after, q)
                if lhs != rhs:
                    return f"{rule.value}: q={q} before={lhs} after={rhs}"
            return None

        return check

    @staticmethod
    def _apply_random_rule(
        rule: RuleName, rng: random.Random, quiver: Quiver, d: SummandVector
    ) -> tuple[Instance, List[Instance]]:
        """Pick rule parameters at random, adjusting d where the rule needs it; returns (before, afters)."""
        sources = [v for v in quiver.vertices if quiver.is_source(v)]
        sinks = [v for v in quiver.vertices if quiver.is_sink(v)]

        if rule == RuleName.ARROW_REVERSAL:
            return (quiver, d), [nodes.reverse_arrows(quiver, d)]
        if rule == RuleName.COMPONENT_SPLIT:
            return (quiver, d), nodes.split_components(quiver, d)
        if rule == RuleName.ZERO_VERTEX_REMOVAL:
            v = rng.choice(quiver.vertices)
            d = SummandVector({**d, v: 0})
            return (quiver, d), [nodes.remove_zero_vertex(quiver, d, v)]
        if rule == RuleName.SOURCE_CONVERSION:
            v = rng.choice(sources)
            return (quiver, d), [nodes.convert_source(quiver, d, v)]
        if rule == RuleName.SINK_CONVERSION:
            v = rng.choice(sinks)
            return (quiver, d), [nodes.convert_sink(quiver, d, v)]
        if rule in (RuleName.SOURCE_SPLIT, RuleName.SINK_SPLIT):
            is_source = rule == RuleName.SOURCE_SPLIT
            ends = sources if is_source else sinks
            candidates = [
                v for v in ends
                if len(quiver.arrows_from(v) if is_source else quiver.arrows_into(v)) >= 2
            ]
            if not candidates:
                raise RuleHypothesisError(f"no {'source' if is_source else 'sink'} with two arrows")
            v = rng.choice(candidates)
            ids = [a.id for a in (quiver.arrows_from(v) if is_source else quiver.arrows_into(v))]
            size = rng.randint(1, len(ids) - 1)
            part = rng.sample(ids, size)
            split = nodes.split_source if is_source else nodes.split_sink
            return (quiver, d), [split(quiver, d, v, part)]
        if rule in (RuleName.SOURCE_MERGE, RuleName.SINK_MERGE):
            ends = sources if rule == RuleName.SOURCE_MERGE else sinks
            if len(ends) < 2:
                raise RuleHypothesisError("merge needs two candidates")
            first, second = rng.sample(ends, 2)
            low = min(d[first], d[second])
            d = SummandVector({**d, first: low, second: low})
            merge = nodes.merge_sources if rule == RuleName.SOURCE_MERGE else nodes.merge_sinks
            return (quiver, d), [merge(quiver, d, first, second)]
        raise ValueError(f"unknown rule {rule}")

    def ops(self, trials: int, seed: int, qs: List[int]) -> SuiteReport:
        """Every rewrite rule preserves the count, cycling through the rules."""
        rules = list(RuleName)

        def cases():
            for trial in range(trials):
                rule = rules[trial % len(rules)]
                rng = self._trial_rng(seed, trial)
                check = self._rule_check(rule, rng.randrange(2**32), qs)
                # redraw until the rule's hypotheses can be met
                for _ in range(200):
                    instance = random_instance(rng)
                    try:
                        self._apply_random_rule(rule, random.Random(0), *instance)
                        break
                    except RadcountError:
                        continue
                yield f"ops[{trial}] {rule.value} {dump_quiver(*instance)}", instance, check

        return self._run_checks("ops", seed, cases())

    # brute force against the naive oracle and the dispatcher

    def _oracle_check(self, qs: List[int]) -> Check:
        def check(quiver: Quiver, d: SummandVector) -> Optional[str]:
            dim = weighted_path_count(quiver, d)
            for q in qs:
                fibered = self.counter.count_commuting(quiver, d, q).value
                plain = self.counter.count_commuting(quiver, d, q, projective=False).value
                if fibered != plain:
                    return f"q={q} projective={fibered} full={plain}"
                if q ** (2 * dim) <= NAIVE_PAIR_LIMIT:
                    naive = self.counter.naive_pair_count(quiver, d, q).value
                    if naive != fibered:
                        return f"q={q} fibered={fibered} naive={naive}"
                dispatched = dispatch_count(quiver, d, q, counter=self.counter).value
                if dispatched != fibered:
                    return f"q={q} fibered={fibered} dispatch={dispatched}"
            return None

        return check

    def oracle(self, trials: int, seed: int, qs: List[int]) -> SuiteReport:
        """Fibered count equals the naive pair count, the full enumeration and dispatch."""
        check = self._oracle_check(qs)

        def cases():
            for trial in range(trials):
                instance = random_instance(self._trial_rng(seed, trial))
                yield f"oracle[{trial}] {dump_quiver(*instance)}", instance, check

        return self._run_checks("oracle", seed, cases())

    # Burnside bridge

    def burnside(self, trials: int, seed: int, qs: List[int]) -> SuiteReport:
        """[A_n, 1] = k(U_n(F_q)) q^(n(n-1)/2) for n <= 4 and q in {2, 3}."""
        results = []
        for n in range(2, 5):
            vertices = tuple(str(i) for i in range(1, n + 1))
            arrows = tuple(Arrow(str(i), str(i + 1), f"a{i - 1}") for i in range(1, n))
            quiver = Quiver(vertices, arrows)
            d = SummandVector({v: 1 for v in vertices})
            for q in [q for q in qs if q in (2, 3)] or [2, 3]:
                count = self.counter.count_commuting(quiver, d, q).value
                classes = count_conjugacy_classes_Un(n, q)
                expected = classes * q ** (n * (n - 1) // 2)
                ok = count == expected
                results.append(
                    TrialResult(
                        name=f"burnside n={n} q={q}",
                        passed=ok,
                        detail=f"count={count} k(U_n)={classes}" + ("" if ok else f" expected={expected}"),
                    )
                )
        return SuiteReport(suite="burnside", seed=seed, trials=results)

    # faithfulness at the sink

    def injectivity(self, trials: int, seed: int, qs: List[int]) -> SuiteReport:
        """A_{Q,d} -> End(V_n) has zero nullity for single-sink oriented quivers."""

        def check_at(q: int) -> Check:
            def check(quiver: Quiver, d: SummandVector) -> Optional[str]:
                kernel = projection_nullity(quiver, d, q)
                return None if kernel == 0 else f"q={q} nullity={kernel}"

            return check

        def cases():
            for trial in range(trials):
                instance = random_single_sink_quiver(self._trial_rng(seed, trial))
                q = qs[trial % len(qs)]
                yield f"injectivity[{trial}] q={q} {dump_quiver(*instance)}", instance, check_at(q)

        return self._run_checks("injectivity", seed, cases())

    # polynomiality and positivity screen

    @staticmethod
    def small_connected_quivers(max_vertices: int = 3) -> List[Instance]:
        """Connected acyclic quivers with arrow multiplicity <= 1 and d in {1,2}, up to isomorphism."""
        seen = {}
        for n in range(1, max_vertices + 1):
            vertices = tuple(str(i) for i in range(1, n + 1))
            pairs = [(u, v) for u in vertices for v in vertices if u != v]
            for mask in range(2 ** len(pairs)):
                chosen = [p for k, p in enumerate(pairs) if mask >> k & 1]
                graph = nx.DiGraph(chosen)
                graph.add_nodes_from(vertices)
                if not nx.is_directed_acyclic_graph(graph) or not nx.is_weakly_connected(graph):
                    continue
                quiver = Quiver(vertices, tuple(Arrow(u, v, f"a{k}") for k, (u, v) in enumerate(chosen)))
                for values in itertools.product((1, 2), repeat=n):
                    d = SummandVector(dict(zip(vertices, values)))
                    seen.setdefault(canonical_hash(quiver, d), (quiver, d))
        return [seen[key] for key in sorted(seen)]

    def positivity(self, trials: int, seed: int, qs: List[int]) -> SuiteReport:
        """Screen every small connected quiver that the q list and budget allow."""
        qs = sorted(qs)
        results = []
        for quiver, d in self.small_connected_quivers():
            name = f"positivity {canonical_hash(quiver, d)[:12]} {dump_quiver(quiver, d)}"
            needed = max(fit_degree_bound(quiver, d, mode) + 2 for mode in ("radical", "overline"))
            if len(qs) < needed:
                results.append(
                    TrialResult(name=name, passed=True, skipped=True, detail=f"needs {needed} field sizes")
                )
                continue
            dim = weighted_path_count(quiver, d)
            if qs[-1] ** dim > self.counter.budget:
                results.append(
                    TrialResult(name=name, passed=True, skipped=True, detail=f"q^D = {qs[-1] ** dim} over budget")
                )
                continue
            report = screen_conjectures(quiver, d, qs, counter=self.counter)
            fitted = all(f.polynomial is not None for f in report.fits)
            detail = "; ".join(f"{f.mode}: {f.polynomial or 'NO FIT'}" for f in report.fits)
            results.append(TrialResult(name=name, passed=fitted, detail=f"{detail}; {report.verdict}"))

        if all(t.skipped for t in results):
            results.append(
                TrialResult(
                    name="positivity screened 0 instances",
                    passed=False,
                    detail=f"{len(qs)} field sizes fit no instance; pass more with --q or raise --budget",
                )
            )
        return SuiteReport(suite="positivity", seed=seed, trials=results)

    # cache audit

    def audit_cache(self, cache: ResultCache, seed: int, fraction: Optional[float] = None) -> SuiteReport:
        """Recompute a seeded sample of cache records; any mismatch fails."""
        fraction = fraction or settings.audit_fraction
        records = list(cache.records())
        size = min(len(records), max(1, math.ceil(fraction * len(records)))) if records else 0
        chosen = sorted(random.Random(seed).sample(range(len(records)), size))
        results = []
        for index in chosen:
            record = records[index]
            quiver, d = quiver_from_file(record.quiver)
            name = f"cache[{index}] {record.mode} q={record.q}"
            if cache_key(quiver, d, record.mode, record.params, record.q) != record.key:
                results.append(TrialResult(name=name, passed=False, detail="key does not match content"))
                continue
            try:
                value = self.counter.count(
                    quiver, d, record.q, record.mode, record.params.get("l"), record.params.get("m")
                ).value
            except BudgetExceededError as e:
                results.append(TrialResult(name=name, passed=True, skipped=True, detail=e.detail))
                continue
            ok = str(value) == record.value
            results.append(
                TrialResult(
                    name=name,
                    passed=ok,
                    detail=f"value={record.value}" + ("" if ok else f" recomputed={value}"),
                )
            )
        return SuiteReport(suite="cache", seed=seed, trials=results)
