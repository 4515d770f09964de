"""Exact linear programming over the rationals.

Dense two-phase simplex with Bland's rule (guaranteed termination, no
degeneracy cycling).  Problem sizes here are tiny -- a handful of named
exponent variables and a few dozen constraints -- so a textbook tableau
over Fraction is fast enough and easy to audit.  Free variables are
shifted to nonnegative ones when a lower bound is visible among the
constraints (and split into differences otherwise); slacks seed the basis
so artificial columns only appear for equality rows and negative slack
rows.

The entry point works on constraints of the form
``coeffs . x + const >= 0`` (or ``== 0``), which is exactly how polytopes
are stored in :mod:`antedb.geometry`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(rows: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [v - f * p for v, p in zip(row, prow)]
    basis[r] = c


def _price_out(obj: list[Fraction], rows: list[list[Fraction]], basis: list[int]) -> list[Fraction]:
    red = list(obj)
    for i, bi in enumerate(basis):
        cb = red[bi]
        if cb != 0:
            row = rows[i]
            red = [v - cb * a for v, a in zip(red, row)]
    return red


def _simplex(rows: list[list[Fraction]], basis: list[int], obj: list[Fraction],
             ncols: int) -> str:
    while True:
        red = _price_out(obj, rows, basis)
        enter = -1
        for j in range(ncols):
            if red[j] > 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best: Optional[Fraction] = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(rows, basis, leave, enter)


def solve_lp(nvars: int,
             objective: Sequence[Fraction],
             constraints: Sequence[tuple[Sequence[Fraction], Fraction, bool]],
             ) -> tuple[str, Optional[Fraction], Optional[list[Fraction]]]:
    """Maximize ``objective . x`` over free x subject to the constraints.

    Each constraint is ``(coeffs, const, is_eq)`` encoding
    ``coeffs . x + const >= 0`` (``== 0`` when is_eq).

    Returns ``(status, value, point)``; point is a maximizer when optimal.
    """
    objective = [Fraction(c) for c in objective]
    rows_in = [([Fraction(c) for c in coeffs], Fraction(const), bool(is_eq))
               for coeffs, const, is_eq in constraints]

    # Find a visible lower bound per variable among single-variable rows.
    lower: dict[int, Fraction] = {}
    for coeffs, const, is_eq in rows_in:
        if is_eq:
            continue
        nz = [(j, c) for j, c in enumerate(coeffs) if c != 0]
        if len(nz) == 1 and nz[0][1] > 0:
            j, c = nz[0]
            bound = -const / c
            if j not in lower or bound > lower[j]:
                lower[j] = bound

    # Column layout: shifted variables first, then (u, v) pairs for the rest.
    col_of: list[tuple[int, Optional[int]]] = []   # var -> (pos col, neg col or None)
    ncols = 0
    for j in range(nvars):
        if j in lower:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2

    def translate(coeffs: Sequence[Fraction], const: Fraction):
        row = [_ZERO] * ncols
        shift = const
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            pos, neg = col_of[j]
            row[pos] += c
            if neg is None:
                shift += c * lower[j]
            else:
                row[neg] -= c
        return row, shift

    rows: list[list[Fraction]] = []
    eq_flags: list[bool] = []
    for coeffs, const, is_eq in rows_in:
        if not is_eq:
            nz = [(j, c) for j, c in enumerate(coeffs) if c != 0]
            if len(nz) == 1 and nz[0][1] > 0 and nz[0][0] in lower:
                # Implied by the shift (y >= 0): drop.
                if -const / nz[0][1] <= lower[nz[0][0]]:
                    continue
        row, shift = translate(coeffs, const)
        # row . y + shift >= 0  <=>  -row . y <= shift
        rows.append([-v for v in row] + [shift])
        eq_flags.append(is_eq)

    m = len(rows)
    nslack = sum(1 for f in eq_flags if not f)
    scol = ncols
    slack_col: list[Optional[int]] = []
    for i in range(m):
        if eq_flags[i]:
            slack_col.append(None)
        else:
            slack_col.append(scol)
            scol += 1
    width = ncols + nslack
    for i in range(m):
        rhs = rows[i].pop()
        pad = [_ZERO] * nslack
        if slack_col[i] is not None:
            pad[slack_col[i] - ncols] = _ONE
        rows[i] = rows[i] + pad + [rhs]
    # Sign-fix rhs.
    for i in range(m):
        if rows[i][-1] < 0:
            rows[i] = [-v for v in rows[i]]
            if slack_col[i] is not None and rows[i][slack_col[i]] < 0:
                pass  # slack coefficient flipped to -1; needs an artificial
    # Choose initial basis: slack where usable, else artificial.
    basis: list[int] = [-1] * m
    art_cols: list[int] = []
    acol = width
    for i in range(m):
        sc = slack_col[i]
        if sc is not None and rows[i][sc] == 1:
            basis[i] = sc
        else:
            art_cols.append(acol)
            basis[i] = acol
            acol += 1
    total = acol
    if art_cols:
        for i in range(m):
            rhs = rows[i].pop()
            pad = [_ZERO] * len(art_cols)
            if basis[i] >= width:
                pad[basis[i] - width] = _ONE
            rows[i] = rows[i] + pad + [rhs]
        phase1 = [_ZERO] * total + [_ZERO]
        for c in art_cols:
            phase1[c] = Fraction(-1)
        status = _simplex(rows, basis, phase1, total)
        assert status == OPTIMAL
        obj_val = _ZERO
        for i, bi in enumerate(basis):
            obj_val += phase1[bi] * rows[i][-1]
        if obj_val < 0:
            return INFEASIBLE, None, None
        # Pivot artificials out of the basis; drop rows that are redundant.
        drop = []
        for i in range(m):
            if basis[i] >= width:
                for j in range(width):
                    if rows[i][j] != 0:
                        _pivot(rows, basis, i, j)
                        break
                else:
                    drop.append(i)
        if drop:
            rows = [r for i, r in enumerate(rows) if i not in drop]
            basis = [b for i, b in enumerate(basis) if i not in drop]
        rows = [r[:width] + [r[-1]] for r in rows]

    # Phase 2.
    obj_row = [_ZERO] * width + [_ZERO]
    obj_const = _ZERO
    for j in range(nvars):
        c = objective[j]
        if c == 0:
            continue
        pos, neg = col_of[j]
        obj_row[pos] += c
        if neg is None:
            obj_const += c * lower[j]
        else:
            obj_row[neg] -= c
    status = _simplex(rows, basis, obj_row, width)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    y = [_ZERO] * width
    for i, bi in enumerate(basis):
        if bi < width:
            y[bi] = rows[i][-1]
    x = []
    for j in range(nvars):
        pos, neg = col_of[j]
        if neg is None:
            x.append(y[pos] + lower[j])
        else:
            x.append(y[pos] - y[neg])
    value = sum(objective[j] * x[j] for j in range(nvars))
    return OPTIMAL, value, x
