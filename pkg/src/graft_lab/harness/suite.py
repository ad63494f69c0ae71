"""Structural checks over graft corpora.

Each check has a short id.  ``check_graft`` runs the selected checks on one
graft for every root and every enumerated minimum join and returns the
violations as data; ``run_suite`` aggregates over a corpus.
"""

from __future__ import annotations

import os
import time
from multiprocessing import Pool
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .._bits import bits, lowest, to_mask
from ..decomposition import DistanceComponent, check_primal_shift, components, universality_map
from ..distance import distance_matrix, path_distance_matrix, path_table
from ..errors import GraftError, PropertyViolation, SizeError
from ..graft_core import Graft, graft_from_json, is_join, new_graft
from ..join_solver import (
    ENUMERATION_CAP,
    _closure_min_joins,
    _parity_table,
    brute_force_min_join,
    min_join,
    min_join_masks,
    nu,
    simple_cycles,
)
from ..kl_decomp import check_ak2part, component_classes, kl_decomposition
from ..negative_sets import check_neicomp2negset, peel_mask
from .generate import CorpusSpec, generate

CHECKS = {
    "nu_oracle": "matching-based nu equals brute-force nu",
    "join_valid": "the solver's join is a join of size nu",
    "min_join_conservative": "a join is minimum exactly when every circuit has weight >= 0",
    "circuit_toggle": "toggling a zero-weight circuit of a minimum join gives a minimum join",
    "enumeration_closure": "subset scan and circuit-toggle closure find the same minimum joins",
    "allowed_edges": "distance -1 criterion equals membership in some minimum join",
    "distance_identity": "nu-difference distance equals minimum path weight, for every minimum join",
    "adjacent_distance": "adjacent vertices differ by exactly 1 in distance from any root",
    "kl_equivalence": "the class relation is an equivalence inside factor-components",
    "class_constancy": "vertices of one class have equal distances to every vertex",
    "level_extreme": "the level-i part of every level-i component is extreme",
    "spine_monotone": "in a primal graft, distance-0 vertices r' satisfy dist(r,x) <= dist(r',x)",
    "cut_law": "capital components are not crossed by F, decapital ones exactly once",
    "primal_shift": "inside a decapital component F is minimum, primal at the F-root, distances shifted",
    "ear_nonnegative": "paths leaving and re-entering a component have weight >= 0, 0 only through the beam",
    "antiroot_anchor": "a decapital component is a level -1 component of its own F-antiroot",
    "congruence_transfer": "K is decapital for every K-congruent root outside K",
    "congruence_converse": "roots having K as a decapital component are K-congruent",
    "distance_translation": "congruent roots shift distances on K by a constant; neighbours sit one above the F-root",
    "universality": "oriented join edges biject onto the decapital components over all roots",
    "decapital_count": "nu decapital components per root, 2 nu over all roots",
    "shore_classes": "allowed boundary edges join one root class to one antiroot class",
    "ak_partition": "the A(K)-family partitions A(K) and splits the D(K)-components",
    "neighbour_negset": "D(K) pieces equal the maximum negative sets of the family members",
    "negset_components": "D(K)-components lie in the right negative set and avoid the others",
    "neighbour_distance": "outside neighbours of a family member sit at distance 1",
    "negset_invariance": "maximum negative sets of KL classes and A(K)-family members do not depend on the join",
}


@dataclass
class Violation:
    check: str
    graft: dict
    params: dict
    message: str

    def to_json(self) -> dict:
        return {"check": self.check, "graft": self.graft, "params": self.params, "message": self.message}


@dataclass
class CheckStats:
    tested: int = 0
    skipped: int = 0
    violations: list[Violation] = field(default_factory=list)


@dataclass
class SuiteReport:
    checks: dict[str, CheckStats]
    grafts: int = 0
    seconds: float = 0.0

    @property
    def total_violations(self) -> int:
        return sum(len(s.violations) for s in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.total_violations == 0

    def merge(self, other: "SuiteReport") -> None:
        self.grafts += other.grafts
        for k, s in other.checks.items():
            mine = self.checks.setdefault(k, CheckStats())
            mine.tested += s.tested
            mine.skipped += s.skipped
            mine.violations.extend(s.violations)

    def to_json(self, max_violations: int = 50) -> dict:
        return {
            "grafts": self.grafts,
            "seconds": round(self.seconds, 3),
            "total_violations": self.total_violations,
            "checks": {
                k: {
                    "description": CHECKS.get(k, ""),
                    "grafts_tested": s.tested,
                    "skipped": s.skipped,
                    "violations": len(s.violations),
                    "examples": [v.to_json() for v in s.violations[:max_violations]],
                }
                for k, s in self.checks.items()
            },
        }


class _Recorder:
    def __init__(self, graft: Graft, checks: set[str], injected: list[list[int]] | None):
        self.graft = graft
        self.want = checks
        self.injected = injected
        self.out: list[Violation] = []
        self.skipped: set[str] = set()

    def __call__(self, check: str, message: str, **params) -> None:
        if check not in self.want:
            return
        g = self.graft.graph
        clean = {}
        for k, v in params.items():
            if k in ("join", "component", "member", "set") and isinstance(v, int):
                clean[k] = g.vertex_names(bits(v)) if k != "join" else sorted(bits(v))
            elif k in ("root", "vertex", "other") and isinstance(v, int):
                clean[k] = g.labels[v]
            else:
                clean[k] = v
        if self.injected is not None:
            clean["injected_joins"] = self.injected
        self.out.append(Violation(check, self.graft.to_json(), clean, message))


def _cycle_array(graft: Graft) -> np.ndarray:
    g = graft.graph
    hit = g._cache.get("cycle_array")
    if hit is None:
        hit = g._cache["cycle_array"] = np.array(simple_cycles(g), dtype=np.int64)
    return hit


def _weights(arr: np.ndarray, fmask: int) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64) - 2 * np.bitwise_count(arr & fmask).astype(np.int64)


def check_graft(
    graft: Graft,
    checks: Iterable[str] | None = None,
    joins: Iterable[Iterable[int]] | None = None,
    cap: int = ENUMERATION_CAP,
) -> list[Violation]:
    """Run ``checks`` (all by default) on one graft; returns violations.

    ``joins`` replaces the enumerated minimum joins, which lets a caller feed
    a deliberately broken join and watch the checks flag it.
    """
    want = set(CHECKS) if checks is None else set(checks)
    injected = None if joins is None else [sorted(j) for j in joins]
    fail = _Recorder(graft, want, injected)
    try:
        _run_checks(graft, want, fail, injected, cap)
    except PropertyViolation as exc:
        fail(exc.check if exc.check in CHECKS else "kl_equivalence", str(exc))
    return fail.out


def _run_checks(graft: Graft, want: set[str], fail: _Recorder, injected, cap: int) -> None:
    g = graft.graph
    n = g.n
    k = nu(graft)

    if "nu_oracle" in want:
        bf = brute_force_min_join(graft).nu
        if bf != k:
            fail("nu_oracle", f"matching nu {k} != brute-force nu {bf}", nu=k, brute_force=bf)
    if "join_valid" in want:
        mj = min_join(graft)
        if not is_join(graft, mj.join) or len(mj.join) != k:
            fail("join_valid", "solver join invalid", join=to_mask(mj.join))

    all_min = min_join_masks(graft)
    masks = all_min[:cap] if injected is None else [to_mask(j) for j in injected]
    min_set = set(all_min)
    D = distance_matrix(graft)

    if "min_join_conservative" in want or "circuit_toggle" in want:
        cyc = _cycle_array(graft)
        for f in masks:
            w = _weights(cyc, f) if len(cyc) else np.zeros(0, dtype=np.int64)
            # every checked join is claimed minimum, so it must be conservative
            conservative = bool((w >= 0).all())
            minimum = f in min_set
            if not conservative:
                fail("min_join_conservative", "join has a negative-weight circuit", join=f, minimum=minimum,
                     circuit=sorted(bits(int(cyc[np.argmin(w)]))))
            elif not minimum and is_join(graft, list(bits(f))):
                fail("min_join_conservative", "conservative join is not minimum", join=f)
            if "circuit_toggle" in want and minimum:
                for c in cyc[w == 0].tolist():
                    if (f ^ c) not in min_set:
                        fail("circuit_toggle", "toggled join is not minimum", join=f, circuit=sorted(bits(c)))
        if "min_join_conservative" in want and injected is None and g.m <= 16:
            odd, size = _parity_table(g)
            joins_all = np.flatnonzero(odd == graft.tmask)
            if len(cyc):
                wall = _weights(cyc[:, None], joins_all[None, :])
                cons = (wall >= 0).all(axis=0)
            else:
                cons = np.ones(len(joins_all), dtype=bool)
            bad = cons != (size[joins_all] == k)
            for f in joins_all[bad].tolist():
                fail("min_join_conservative", "conservativeness disagrees with minimality", join=f)

    if "enumeration_closure" in want and injected is None and len(all_min) <= cap:
        closure = _closure_min_joins(graft, cap)
        if sorted(closure) != sorted(all_min):
            fail("enumeration_closure", "closure and scan enumerations differ",
                 scan=len(all_min), closure=len(closure))

    kl = None
    try:
        kl = kl_decomposition(graft)
    except PropertyViolation as exc:
        fail("kl_equivalence", str(exc))
    if kl is not None and "kl_equivalence" in want:
        for cm in kl.class_masks:
            if cm & ~kl.fc_masks[kl.fc_index[lowest(cm)]]:
                fail("kl_equivalence", "class leaves its factor-component", set=cm)

    if "allowed_edges" in want:
        union = 0
        for f in all_min:
            union |= f
        by_dist = to_mask(e for e, (u, v) in enumerate(g.edges) if D[u][v] == -1)
        if union != by_dist:
            fail("allowed_edges", "allowed-edge criteria disagree", by_membership=sorted(bits(union)),
                 by_distance=sorted(bits(by_dist)))

    if "adjacent_distance" in want and graft.is_bipartite:
        for r in range(n):
            row = D[r]
            for u, v in g.edges:
                if row[u] is not None and abs(row[u] - row[v]) != 1:
                    fail("adjacent_distance", "adjacent distances differ by more than 1", root=r,
                         vertex=u, other=v)

    if "class_constancy" in want and kl is not None:
        for cm in kl.class_masks:
            vs = list(bits(cm))
            for x in vs[1:]:
                if D[x] != D[vs[0]]:
                    fail("class_constancy", "class members have different distance rows", vertex=vs[0], other=x)

    if "spine_monotone" in want and graft.is_bipartite:
        for r in range(n):
            row = D[r]
            if all(d is None or d <= 0 for d in row):
                for r2 in range(n):
                    if row[r2] == 0 and r2 != r:
                        for x in range(n):
                            if row[x] is not None and row[x] > D[r2][x]:
                                fail("spine_monotone", "primal root not closest", root=r, other=r2, vertex=x)

    if "distance_identity" in want:
        try:
            path_table(g)
        except SizeError:
            fail.skipped.add("distance_identity")
        else:
            for f in masks:
                if injected is not None and f not in min_set:
                    continue
                if path_distance_matrix(graft, f) != D:
                    fail("distance_identity", "path distances differ from nu differences", join=f)

    if not graft.is_bipartite:
        return
    _component_checks(graft, want, fail, masks, min_set, D, kl, k, injected)


def _component_checks(graft, want, fail, masks, min_set, D, kl, k, injected) -> None:
    g = graft.graph
    n = g.n
    # join-independent structure per root
    skeleton: dict[int, list[DistanceComponent]] = {}
    decap_sets: dict[int, set[int]] = {}
    level_minus1: dict[int, set[int]] = {}
    for r in range(n):
        comps = components(graft, 0, r, strict=False)
        skeleton[r] = comps
        decap_sets[r] = {K.mask for K in comps if not K.capital}
        level_minus1[r] = {K.mask for K in comps if K.level == -1}

    if "level_extreme" in want:
        seen = set()
        for r in range(n):
            for K in skeleton[r]:
                if K.ak_mask in seen:
                    continue
                seen.add(K.ak_mask)
                a = list(bits(K.ak_mask))
                if any(D[x][y] < 0 for x in a for y in a):
                    fail("level_extreme", "level part of a component is not extreme", root=r, component=K.mask)

    if "decapital_count" in want:
        union = set()
        for r in range(n):
            union |= decap_sets[r]
            if len(decap_sets[r]) != k:
                fail("decapital_count", f"{len(decap_sets[r])} decapital components, nu = {k}", root=r)
        if len(union) != 2 * k:
            fail("decapital_count", f"{len(union)} decapital components over all roots, 2 nu = {2 * k}")

    classes: dict[tuple[int, int], object] = {}
    if kl is not None:
        for r in range(n):
            for K in skeleton[r]:
                if K.capital or (K.mask, K.ak_mask) in classes:
                    continue
                try:
                    cc = component_classes(graft, 0, K, kl)
                except PropertyViolation as exc:
                    fail("shore_classes", str(exc), root=r, component=K.mask)
                    cc = None
                classes[(K.mask, K.ak_mask)] = cc
                if cc is None:
                    continue
                if "ak_partition" in want:
                    try:
                        check_ak2part(graft, 0, K, cc, kl)
                    except PropertyViolation as exc:
                        fail("ak_partition", str(exc), root=r, component=K.mask)
                if "neighbour_distance" in want:
                    for idx, S in enumerate(cc.family_masks):
                        outside = g.neighbours(S) & ~K.mask
                        if idx == 0:
                            outside &= ~cc.antiroot_class_mask
                        for s in bits(S):
                            for x in bits(outside):
                                if D[s][x] != 1:
                                    fail("neighbour_distance", f"distance {D[s][x]} != 1", root=r,
                                         component=K.mask, vertex=s, other=x)

    negset_first: dict[tuple[int, int], int] = {}
    for f in masks:
        if injected is not None and f not in min_set:
            continue
        _join_checks(graft, want, fail, f, skeleton, decap_sets, level_minus1, classes, D, negset_first, kl)


def _join_checks(graft, want, fail, f, skeleton, decap_sets, level_minus1, classes, D, negset_first, kl) -> None:
    g = graft.graph
    n = g.n
    table = None
    w = None
    if {"ear_nonnegative", "neighbour_negset", "negset_components", "negset_invariance"} & want:
        try:
            table = path_table(g)
            w = table.weights(f)
        except SizeError:
            table = None

    def peel(s: int, y: int) -> int:
        return peel_mask(graft, f, s, y, w)

    per_mask_done: set[int] = set()
    for r in range(n):
        comps = components(graft, f, r, strict=False)
        for K in comps:
            crossing = (g.cut(K.mask) & f).bit_count()
            if K.capital:
                if crossing:
                    fail("cut_law", f"capital component crossed by {crossing} join edges", join=f, root=r,
                         component=K.mask)
                if table is not None and "ear_nonnegative" in want:
                    _ear_check(fail, table, w, f, K, None)
                continue
            if crossing != 1:
                fail("cut_law", f"decapital component crossed by {crossing} join edges", join=f, root=r,
                     component=K.mask)
                continue
            rk, sk = K.f_root, K.f_antiroot

            if "primal_shift" in want:
                try:
                    check_primal_shift(graft, f, K)
                except PropertyViolation as exc:
                    fail("primal_shift", str(exc), join=f, root=r, component=K.mask)

            if "distance_translation" in want:
                for r2 in range(n):
                    if K.mask >> r2 & 1 or D[r2][rk] != D[r2][sk] - 1:
                        continue
                    d = D[r2][rk] - D[r][rk]
                    for x in bits(K.mask):
                        if D[r2][x] != D[r][x] + d:
                            fail("distance_translation", "distance shift not constant on K", join=f, root=r,
                                 other=r2, component=K.mask, vertex=x)
                    for x in bits(g.neighbours(K.mask)):
                        if D[r2][x] != D[r2][rk] + 1:
                            fail("distance_translation", "neighbour not one above the F-root", join=f, root=r,
                                 other=r2, component=K.mask, vertex=x)

            cc = classes.get((K.mask, K.ak_mask))
            if cc is not None and table is not None:
                if "neighbour_negset" in want:
                    try:
                        check_neicomp2negset(graft, f, K, cc, peel)
                    except PropertyViolation as exc:
                        fail("neighbour_negset", str(exc), join=f, root=r, component=K.mask)
                if "negset_components" in want:
                    _negset_component_check(graft, fail, f, r, K, cc, comps, classes, peel)
                if "negset_invariance" in want:
                    for idx, S in enumerate(cc.family_masks):
                        for y in ((cc.antiroot_class_mask,) if idx == 0 else (0, cc.antiroot_class_mask)):
                            _invariance(fail, negset_first, f, S, y, peel(S, y))

            if K.mask in per_mask_done:
                continue
            per_mask_done.add(K.mask)

            if table is not None and "ear_nonnegative" in want:
                _ear_check(fail, table, w, f, K, (rk, K.beam))

            if "antiroot_anchor" in want and K.mask not in level_minus1[sk]:
                fail("antiroot_anchor", "component is not a level -1 component of its F-antiroot", join=f,
                     root=r, component=K.mask)

            if {"congruence_transfer", "congruence_converse"} & want:
                for r2 in range(n):
                    if K.mask >> r2 & 1:
                        continue
                    congruent = D[r2][rk] == D[r2][sk] - 1
                    member = K.mask in decap_sets[r2]
                    if congruent and not member:
                        fail("congruence_transfer", "congruent root does not see K as decapital", join=f,
                             root=r, other=r2, component=K.mask)
                    if member and not congruent:
                        fail("congruence_converse", "root sees K as decapital without congruence", join=f,
                             root=r, other=r2, component=K.mask)

    if table is not None and "negset_invariance" in want and kl is not None:
        for c in kl.class_masks:
            _invariance(fail, negset_first, f, c, 0, peel(c, 0))

    if "universality" in want:
        try:
            umap = universality_map(graft, f)
        except GraftError as exc:
            fail("universality", str(exc), join=f)
        else:
            union = set()
            for r in range(n):
                union |= decap_sets[r]
            if umap.image() != union or len(umap.pairs) != 2 * f.bit_count():
                fail("universality", "orientation map image differs from all decapital components", join=f)


def _ear_check(fail, table, w, f, K: DistanceComponent, beam) -> None:
    """Paths with both ends in K and a nonempty interior outside K."""
    km = K.mask
    ends = table.startbit | table.endbit
    sel = ((table.vmask & km) == ends) & ((table.startbit & km) != 0) & ((table.endbit & km) != 0)
    sel &= (table.vmask & ~km) != 0
    if not sel.any():
        return
    ws = w[sel]
    if (ws < 0).any():
        fail("ear_nonnegative", "negative ear", join=f, root=K.root, component=km)
        return
    zero = ws == 0
    if zero.any():
        if beam is None:
            fail("ear_nonnegative", "zero-weight ear on a capital component", join=f, root=K.root, component=km)
            return
        rk, e = beam
        st = table.start[sel][zero]
        en = table.end[sel][zero]
        em = table.emask[sel][zero]
        ok = ((st == rk) | (en == rk)) & ((em >> e) & 1 == 1)
        if not ok.all():
            fail("ear_nonnegative", "zero-weight ear avoids the F-root or the beam", join=f, root=K.root,
                 component=km)


def _negset_component_check(graft, fail, f, r, K, cc, comps, classes, peel) -> None:
    by_mask = {(L.mask, L.level): L for L in comps}
    for Lmask in K.dk_masks:
        L = by_mask.get((Lmask, K.level - 1))
        if L is None or L.capital:
            fail("negset_components", "D(K)-component is not a decapital component one level down", join=f,
                 root=r, component=K.mask, set=Lmask)
            continue
        ccl = classes.get((L.mask, L.ak_mask))
        if ccl is None:
            continue
        tl = ccl.antiroot_class_mask & K.ak_mask
        if tl not in cc.family_masks:
            fail("negset_components", "antiroot class of L is not an A(K)-family member", join=f, root=r,
                 component=K.mask, set=Lmask)
            continue
        if Lmask & ~peel(tl, cc.antiroot_class_mask):
            fail("negset_components", "L escapes the negative set of its antiroot class", join=f, root=r,
                 component=K.mask, set=Lmask)
        for S in cc.family_masks:
            if S != tl and Lmask & peel(S, 0):
                fail("negset_components", "L meets the negative set of another family member", join=f, root=r,
                     component=K.mask, set=Lmask, member=S)


def _invariance(fail, first: dict, f: int, s: int, y: int, value: int) -> None:
    key = (s, y)
    prev = first.get(key)
    if prev is None:
        first[key] = value
    elif prev != value:
        fail("negset_invariance", "maximum negative set changed with the join", join=f, set=s, avoid=y)


def replay(violation: Violation | dict) -> bool:
    """Re-run the violated check on the embedded graft; True if it fails again."""
    if isinstance(violation, dict):
        violation = Violation(**violation)
    graft = graft_from_json(violation.graft)
    joins = violation.params.get("injected_joins")
    again = check_graft(graft, [violation.check], joins=joins)
    return any(v.check == violation.check and v.params == violation.params for v in again)


def _check_batch(payload: tuple[list[tuple], list[str] | None, int]) -> SuiteReport:
    rows, checks, cap = payload
    report = SuiteReport({c: CheckStats() for c in (checks or CHECKS)})
    graph_cache = {}
    for data in rows:
        key = (tuple(data["vertices"]), tuple(map(tuple, data["edges"])))
        graft = graft_from_json(data)
        if key in graph_cache:
            graft = new_graft(graph_cache[key], graft.terminals)
        else:
            graph_cache[key] = graft.graph
        _tally(report, graft, checks, cap)
    return report


def _tally(report: SuiteReport, graft: Graft, checks, cap) -> None:
    report.grafts += 1
    vs = check_graft(graft, checks, cap=cap)
    for name, stats in report.checks.items():
        stats.tested += 1
    for v in vs:
        report.checks.setdefault(v.check, CheckStats()).violations.append(v)


def thread_count() -> int:
    env = os.environ.get("GRAFT_LAB_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cpus))
        except ValueError:
            pass
    return cpus


def _batches(grafts: Iterable[Graft], size: int = 256) -> Iterator[list[dict]]:
    batch = []
    for gr in grafts:
        batch.append(gr.to_json())
        if len(batch) >= size:
            yield batch
            batch = []
    if batch:
        yield batch


def run_suite(
    corpus: CorpusSpec | Iterable[Graft],
    checks: Iterable[str] | None = None,
    threads: int | None = None,
    cap: int = ENUMERATION_CAP,
    progress: Callable[[int], None] | None = None,
) -> SuiteReport:
    """Run the selected checks on every graft of ``corpus``."""
    if checks is not None:
        checks = list(checks)
        unknown = set(checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
    grafts = generate(corpus) if isinstance(corpus, CorpusSpec) else corpus
    threads = thread_count() if threads is None else threads
    report = SuiteReport({c: CheckStats() for c in (checks or CHECKS)})
    t0 = time.perf_counter()
    if threads <= 1:
        for graft in grafts:
            _tally(report, graft, checks, cap)
            if progress and report.grafts % 1000 == 0:
                progress(report.grafts)
    else:
        with Pool(threads) as pool:
            payloads = ((b, checks, cap) for b in _batches(grafts))
            for part in pool.imap(_check_batch, payloads):
                report.merge(part)
                if progress:
                    progress(report.grafts)
    report.seconds = time.perf_counter() - t0
    return report
