"""Independent reference implementations the tests compare against.

Deliberately dumb: pure Python, no numpy, different algorithms than the
package (bitmask Floyd-Warshall vs incremental closure, quadratic DP vs
patience sorting) so agreement actually means something.
"""

from typing import List, Sequence, Set, Tuple


def fw_close(pairs, n: int) -> Set[Tuple[int, int]]:
    """Reflexive-transitive closure; rows kept as int bitmasks."""
    rows = [1 << i for i in range(n)]
    for i, j in pairs:
        rows[i] |= 1 << j
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rows[k]
    return {(i, j) for i in range(n) for j in range(n) if rows[i] >> j & 1}


def is_transitive(rel: Set[Tuple[int, int]], n: int) -> bool:
    for i, j in rel:
        for k in range(n):
            if (j, k) in rel and (i, k) not in rel:
                return False
    return True


def is_antisymmetric(rel: Set[Tuple[int, int]]) -> bool:
    return all(not (i != j and (j, i) in rel) for i, j in rel)


def lis_length(seq: Sequence[int]) -> int:
    """Longest strictly increasing subsequence, O(n^2)."""
    best: List[int] = []
    for t in range(len(seq)):
        best.append(1 + max((best[u] for u in range(t) if seq[u] < seq[t]), default=0))
    return max(best, default=0)


def lds_length(seq: Sequence[int]) -> int:
    return lis_length([-x for x in seq])


def longest_chain_length(holds, n: int) -> int:
    """Longest chain in a finite poset given its 'holds(i, j)' relation,
    O(n^2) DP over a topological order by number of strict predecessors."""
    below = {
        i: sum(1 for j in range(n) if j != i and holds(j, i)) for i in range(n)
    }
    order = sorted(range(n), key=lambda i: below[i])
    best = {}
    for i in order:
        best[i] = 1 + max(
            (best[j] for j in order if j in best and j != i and holds(j, i)),
            default=0,
        )
    return max(best.values(), default=0)


def largest_antichain_floor(holds, n: int) -> int:
    """Greedy antichain size by repeatedly taking a minimal untaken element
    incomparable to the picks; a lower bound, enough for floor checks."""
    picked: List[int] = []
    for x in range(n):
        if all(not holds(x, y) and not holds(y, x) for y in picked if y != x):
            picked.append(x)
    return len(picked)
