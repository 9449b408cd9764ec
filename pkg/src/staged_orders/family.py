"""From a shrinking preorder approximation to a computable set family.

A co-c.e. preorder is given by its limit plus a removal stage for every
pair outside the limit; the stage-s view contains the limit and every
pair not yet removed. The construction allocates one fresh element per
witnessed non-relation per stage and the inclusion order of the grown
family reproduces the limit: i is below j exactly when A_i is a subset
of A_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .kernel import (
    ConfigError,
    Kind,
    Snapshot,
    StagedOrderError,
    check_preorder,
    close_matrix,
)


class SpeedupBudgetExceeded(StagedOrderError):
    pass


@dataclass(frozen=True)
class CoCEPreorder:
    n: int
    limit: Snapshot  # reflexive and transitive
    removal_stage: Tuple[Tuple[Tuple[int, int], int], ...]  # ((i,j), stage) per non-pair

    def __post_init__(self):
        report = check_preorder(self.limit)
        if self.limit.domain_size != self.n or not report.passed:
            raise ConfigError("limit must be a preorder on the declared domain")
        covered = {pair for pair, _ in self.removal_stage}
        if len(covered) != len(self.removal_stage):
            raise ConfigError("duplicate removal entries")
        complement = {
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if i != j and not self.limit.matrix[i, j]
        }
        if covered != complement:
            raise ConfigError(
                "removal schedule must cover exactly the pairs outside the limit"
            )
        if any(stage < 0 for _, stage in self.removal_stage):
            raise ConfigError("removal stages are naturals")

    @property
    def max_removal_stage(self) -> int:
        return max((stage for _, stage in self.removal_stage), default=0)

    def view(self, s: int) -> np.ndarray:
        """Pairs held at stage s: the limit plus pairs removed later."""
        matrix = self.limit.matrix.copy()
        for (i, j), stage in self.removal_stage:
            if stage > s:
                matrix[i, j] = True
        return matrix


def preorder_from_config(blob: dict) -> CoCEPreorder:
    n = blob.get("n")
    if not isinstance(n, int) or n < 0:
        raise ConfigError("config needs a natural 'n'")
    limit_pairs = blob.get("limit_pairs", [])
    removals = blob.get("removals")
    if not isinstance(limit_pairs, list) or not isinstance(removals, list):
        raise ConfigError("config needs 'limit_pairs' and 'removals' lists")
    matrix = np.eye(n, dtype=bool)
    for p in limit_pairs:
        if not (isinstance(p, list) and len(p) == 2 and 0 <= p[0] < n and 0 <= p[1] < n):
            raise ConfigError(f"malformed limit pair {p!r}")
        matrix[p[0], p[1]] = True
    close_matrix(matrix)
    schedule = []
    for entry in removals:
        if not (
            isinstance(entry, list)
            and len(entry) == 3
            and all(isinstance(v, int) for v in entry)
        ):
            raise ConfigError(f"malformed removal {entry!r}")
        i, j, stage = entry
        schedule.append(((i, j), stage))
    return CoCEPreorder(n, Snapshot(n, 0, matrix), tuple(schedule))


def preorder_to_config(pre: CoCEPreorder) -> dict:
    pairs = sorted(p for p in pre.limit.pairs if p[0] != p[1])
    removals = sorted([i, j, stage] for (i, j), stage in pre.removal_stage)
    return {"n": pre.n, "limit_pairs": [list(p) for p in pairs], "removals": removals}


def _transitive_on(matrix: np.ndarray, bound: int) -> bool:
    sub = matrix[:bound, :bound]
    via = (sub.astype(np.uint8) @ sub.astype(np.uint8)) > 0
    return not bool((via & ~sub).any())


def speedup(pre: CoCEPreorder, s: int, horizon: Optional[int] = None) -> int:
    """Least stage s' >= s whose view is transitive on the working window
    {0..s+1}. The enumeration is fast-forwarded, never edited."""
    window = min(s + 1, pre.n - 1) + 1 if pre.n else 0
    limit_stage = max(s, pre.max_removal_stage)
    budget = limit_stage if horizon is None else horizon
    t = s
    while True:
        if _transitive_on(pre.view(t), window):
            return t
        t += 1
        if t > budget:
            raise SpeedupBudgetExceeded(
                f"no transitive stage in [{s}, {budget}] for window {window}"
            )


@dataclass(frozen=True)
class SetFamily:
    n: int
    element_count: int
    rows: Tuple[frozenset, ...]  # rows[i] = A_i as a set of allocated elements

    def row(self, i: int) -> frozenset:
        return self.rows[i]

    def included(self, i: int, j: int) -> bool:
        return self.rows[i] <= self.rows[j]

    def to_obj(self) -> dict:
        membership = [
            [1 if e in self.rows[i] else 0 for e in range(self.element_count)]
            for i in range(self.n)
        ]
        return {"n": self.n, "elements": self.element_count, "membership": membership}

    @classmethod
    def from_obj(cls, obj) -> "SetFamily":
        if not isinstance(obj, dict):
            raise ConfigError("family JSON must be an object")
        n = obj.get("n")
        count = obj.get("elements")
        membership = obj.get("membership")
        if not (isinstance(n, int) and isinstance(count, int) and isinstance(membership, list)):
            raise ConfigError("family JSON needs n, elements, membership")
        if len(membership) != n or any(len(row) != count for row in membership):
            raise ConfigError("membership must be n rows of 'elements' bits")
        rows = tuple(
            frozenset(e for e in range(count) if membership[i][e]) for i in range(n)
        )
        return cls(n, count, rows)


def sufficient_stages(pre: CoCEPreorder) -> int:
    """Stages after which the family provably mirrors the limit: every
    index has had its stage and a full post-stabilization sweep ran."""
    return max(pre.n, pre.max_removal_stage) + 1


def build_family(pre: CoCEPreorder, stages: int) -> SetFamily:
    """Stage s: first fold A_i into A_s for each i held below s by the
    sped-up view; then every witnessed non-relation i /<= j gets a fresh
    element placed in exactly the A_k the view puts above i."""
    rows: List[set] = [set() for _ in range(pre.n)]
    fresh = 0
    for s in range(stages):
        view = pre.view(speedup(pre, s))
        w = min(s, pre.n - 1)
        if pre.n and s <= pre.n - 1:
            for i in range(s + 1):
                if view[i, s]:
                    rows[s] |= rows[i]
        for i in range(w + 1):
            for j in range(w + 1):
                if i != j and not view[i, j]:
                    e = fresh
                    fresh += 1
                    for k in range(w + 1):
                        if view[i, k]:
                            rows[k].add(e)
    return SetFamily(pre.n, fresh, tuple(frozenset(r) for r in rows))


@dataclass(frozen=True)
class IsomorphismReport:
    passed: bool
    mismatches: Tuple[Tuple[int, int], ...]  # (i, j) where i<=j and A_i<=A_j disagree


def verify_isomorphism(pre: CoCEPreorder, fam: SetFamily) -> IsomorphismReport:
    """The map i -> A_i must carry the limit order to inclusion exactly."""
    bad = []
    for i in range(pre.n):
        for j in range(pre.n):
            if bool(pre.limit.matrix[i, j]) != fam.included(i, j):
                bad.append((i, j))
    return IsomorphismReport(not bad, tuple(bad))
