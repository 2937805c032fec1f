"""Linear algebra over Z/2 with Python ints as bit rows."""

from __future__ import annotations


def rank(rows) -> int:
    """Rank of the matrix whose rows are the given bitsets."""
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = row
                r += 1
                break
            row ^= p
    return r


def solve(equations, nvars: int):
    """Solve a system given as (coefficient bitset, rhs bit) pairs.

    Returns one solution as a bitset over the variables, or None.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for coeffs, rhs in equations:
        while coeffs:
            top = coeffs.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = (coeffs, rhs)
                break
            coeffs ^= p[0]
            rhs ^= p[1]
        else:
            if rhs:
                return None
    # back substitution, lowest pivot first
    x = 0
    for top in sorted(pivots):
        coeffs, rhs = pivots[top]
        rest = coeffs & ~(1 << top)
        val = rhs ^ (bin(rest & x).count("1") & 1)
        if val:
            x |= 1 << top
    return x


def matrix_rank(cols: dict, row_index: dict) -> int:
    """Rank of a sparse matrix given as column -> set of row keys."""
    rows = []
    for image in cols.values():
        v = 0
        for key in image:
            v |= 1 << row_index[key]
        rows.append(v)
    return rank(rows)
