"""GF(2) linear algebra on rows packed into Python ints.

Rows are arbitrary-precision ints (bit j = column j), so XOR, AND and
popcount run word-wise in C.  This keeps the rank / elimination kernels at
O(rows * cols / 64) word operations, which is what makes the exact
marginal-purity path usable at a few thousand qubits.
"""

from __future__ import annotations

from typing import List, Sequence


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank of the row set over GF(2)."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def gf2_eliminate(rows: Sequence[int], col_order: Sequence[int]):
    """Row-reduce in the given column order, tracking row combinations.

    Returns (reduced_rows, combos) where combos[i] is a bitmask over the
    *input* rows whose XOR equals reduced_rows[i].  Reduced form: for each
    pivot column (scanned in col_order) exactly one row has that bit set, and
    pivot rows are ordered by pivot; non-pivot rows come last and are zero.
    Pivot selection takes the lowest-index candidate row.
    """
    work = list(rows)
    combos = [1 << i for i in range(len(work))]
    pivot_rows = []
    next_free = 0
    for col in col_order:
        colbit = 1 << col
        pivot = None
        for r in range(next_free, len(work)):
            if work[r] & colbit:
                pivot = r
                break
        if pivot is None:
            continue
        work[next_free], work[pivot] = work[pivot], work[next_free]
        combos[next_free], combos[pivot] = combos[pivot], combos[next_free]
        for r in range(len(work)):
            if r != next_free and (work[r] & colbit):
                work[r] ^= work[next_free]
                combos[r] ^= combos[next_free]
        pivot_rows.append(next_free)
        next_free += 1
    return work, combos, next_free
