"""One-variable piecewise-affine upper bounds with provenance.

A PiecewiseBound stores sorted closed pieces (lo, hi, affine form, hypothesis
id).  Pieces may be single points (lo == hi), which is how exact endpoint
facts like "the bound at 0 is 0" are kept.  Where adjacent pieces disagree at
a shared endpoint the discontinuity is explicit and retrievable; the value of
the bound at a point is always the minimum over the pieces covering it.

Genuine minus-infinity stretches (regions where a quantity is impossible)
are kept in a separate interval list so they never collapse into rational
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import AffineForm, affine, const
from .num import NEG_INF, Q, qstr


class CoverageGap(ValueError):
    """The requested domain is not fully covered by the given pieces."""


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    form: AffineForm
    provenance: str

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"piece with lo {qstr(self.lo)} > hi {qstr(self.hi)}")
        if len(self.form.variables) > 1:
            raise ValueError("piece form must be univariate")

    def value(self, x: Fraction) -> Fraction:
        v = self.form.variables
        return self.form.evaluate({v[0]: x}) if v else self.form.const

    def covers(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class PiecewiseBound:
    variable: str
    pieces: tuple[Piece, ...]
    minus_infinity: tuple[tuple[Fraction, Fraction], ...] = ()

    @property
    def domain(self) -> Optional[tuple[Fraction, Fraction]]:
        if not self.pieces:
            return None
        return self.pieces[0].lo, self.pieces[-1].hi

    def breakpoints(self) -> list[Fraction]:
        pts = set()
        for p in self.pieces:
            pts.add(p.lo)
            pts.add(p.hi)
        return sorted(pts)

    def value_at(self, x: Fraction):
        """Exact bound value: min over covering pieces; -inf in impossible zones."""
        x = Q(x)
        for lo, hi in self.minus_infinity:
            if lo <= x <= hi:
                return NEG_INF
        vals = [p.value(x) for p in self.pieces if p.covers(x)]
        if not vals:
            return None
        return min(vals)

    def covers(self, lo: Fraction, hi: Fraction) -> bool:
        """True iff [lo, hi] is covered by pieces with no gaps."""
        lo, hi = Q(lo), Q(hi)
        cur = lo
        for p in sorted(self.pieces, key=lambda p: (p.lo, p.hi)):
            if p.lo > cur:
                return False
            cur = max(cur, p.hi)
            if cur >= hi:
                return True
        return cur >= hi

    def restricted(self, lo: Fraction, hi: Fraction) -> "PiecewiseBound":
        lo, hi = Q(lo), Q(hi)
        out = []
        for p in self.pieces:
            a, b = max(p.lo, lo), min(p.hi, hi)
            if a <= b:
                out.append(Piece(a, b, p.form, p.provenance))
        minf = tuple((max(a, lo), min(b, hi)) for a, b in self.minus_infinity
                     if max(a, lo) <= min(b, hi))
        return PiecewiseBound(self.variable, tuple(out), minf)

    def discontinuities(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(x, left limit, right limit) at interior breakpoints where they differ."""
        out = []
        for x in self.breakpoints():
            left = [p.value(x) for p in self.pieces if p.lo < x <= p.hi]
            right = [p.value(x) for p in self.pieces if p.lo <= x < p.hi]
            if left and right and min(left) != min(right):
                out.append((x, min(left), min(right)))
        return out

    def serialize(self) -> str:
        """One piece per line: `lo/hi  c0 + c1*var  #hypothesis-id`."""
        lines = []
        for p in self.pieces:
            c0 = p.form.const
            c1 = p.form.coeff(self.variable)
            lines.append(f"{qstr(p.lo)}/{qstr(p.hi)}  {qstr(c0)} + {qstr(c1)}*{self.variable}"
                         f"  #{p.provenance}")
        for lo, hi in self.minus_infinity:
            lines.append(f"{qstr(lo)}/{qstr(hi)}  -inf  #impossible")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.serialize()


def single(variable: str, lo, hi, form: AffineForm, provenance: str) -> PiecewiseBound:
    return PiecewiseBound(variable, (Piece(Q(lo), Q(hi), form, provenance),))


def point_bound(variable: str, x, value, provenance: str) -> PiecewiseBound:
    return PiecewiseBound(variable, (Piece(Q(x), Q(x), const(value), provenance),))


def _crossings(f: AffineForm, g: AffineForm, variable: str,
               lo: Fraction, hi: Fraction) -> list[Fraction]:
    a = f.coeff(variable) - g.coeff(variable)
    b = f.const - g.const
    if a == 0:
        return []
    x = -b / a
    return [x] if lo < x < hi else []


def envelope(bounds: Sequence[PiecewiseBound], domain: tuple = None,
             require_cover: bool = True) -> PiecewiseBound:
    """Pointwise minimum of the given bounds as a new PiecewiseBound.

    Output pieces carry the provenance of the input achieving the minimum
    (ties: lexicographically smallest provenance).  Breakpoints are exactly
    the crossing points and the activation boundaries of range-limited
    inputs.  An uncovered sub-interval raises CoverageGap unless
    require_cover is False.
    """
    if not bounds:
        raise ValueError("envelope of no bounds")
    variable = bounds[0].variable
    for b in bounds:
        if b.variable != variable:
            raise ValueError("envelope inputs must share the variable")
    all_pieces = [p for b in bounds for p in b.pieces]
    if domain is None:
        lo = min(p.lo for p in all_pieces)
        hi = max(p.hi for p in all_pieces)
    else:
        lo, hi = Q(domain[0]), Q(domain[1])
    pieces = [p for p in all_pieces if max(p.lo, lo) <= min(p.hi, hi)]
    events = {lo, hi}
    for p in pieces:
        if lo <= p.lo <= hi:
            events.add(p.lo)
        if lo <= p.hi <= hi:
            events.add(p.hi)
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            a, b = max(p.lo, q.lo, lo), min(p.hi, q.hi, hi)
            if a < b:
                for x in _crossings(p.form, q.form, variable, a, b):
                    events.add(x)
    xs = sorted(events)
    out: list[Piece] = []
    for x0, x1 in zip(xs, xs[1:]):
        mid = (x0 + x1) / 2
        active = [p for p in pieces if p.lo <= mid <= p.hi]
        if not active:
            if require_cover:
                raise CoverageGap(
                    f"no bound covers ({qstr(x0)}, {qstr(x1)}) on {variable}")
            continue
        best = min(active, key=lambda p: (p.value(mid), p.provenance))
        out.append(Piece(x0, x1, best.form, best.provenance))
    # Point pieces (lo == hi) can lower the value at isolated points.
    for x in xs:
        covering = [p for p in pieces if p.covers(x)]
        if not covering:
            continue
        vals = [(p.value(x), p.provenance) for p in covering]
        vmin, prov = min(vals)
        interval_min = min((p.value(x) for p in out if p.covers(x)), default=None)
        if interval_min is None or vmin < interval_min:
            out.append(Piece(x, x, const(vmin), prov))
    out.sort(key=lambda p: (p.lo, p.hi))
    merged: list[Piece] = []
    for p in out:
        if merged:
            q = merged[-1]
            if (q.hi == p.lo and q.form == p.form and q.provenance == p.provenance
                    and p.lo < p.hi and q.lo < q.hi):
                merged[-1] = Piece(q.lo, p.hi, p.form, p.provenance)
                continue
        merged.append(p)
    minf = tuple(sorted(set(
        iv for b in bounds for iv in b.minus_infinity
        if max(iv[0], lo) <= min(iv[1], hi))))
    return PiecewiseBound(variable, tuple(merged), minf)


def reflect_beta(b: PiecewiseBound) -> PiecewiseBound:
    """Image of a beta bound under the symmetry at alpha -> 1 - alpha.

    From the bound at alpha one gets, at alpha' = 1 - alpha, the value
    b(1 - alpha') + alpha' - 1/2.  Applying the map twice is the identity.
    """
    if b.variable != "alpha":
        raise ValueError("reflection applies to bounds in alpha")
    dom = b.domain
    if dom and (dom[0] < 0 or dom[1] > 1):
        raise ValueError("reflection needs domain within [0, 1]")
    out = []
    for p in b.pieces:
        c0, c1 = p.form.const, p.form.coeff("alpha")
        # value'(a') = c0 + c1*(1-a') + a' - 1/2
        form = affine({"alpha": 1 - c1}, c0 + c1 - Q(1, 2))
        out.append(Piece(1 - p.hi, 1 - p.lo, form, p.provenance))
    out.sort(key=lambda p: (p.lo, p.hi))
    minf = tuple(sorted((1 - hi, 1 - lo) for lo, hi in b.minus_infinity))
    return PiecewiseBound("alpha", tuple(out), minf)


def dominates(b: PiecewiseBound, line: AffineForm) -> bool:
    """True iff line(x) >= b(x) at every breakpoint of b.

    b(x) is the pointwise bound value (minimum over covering pieces).
    Affine functions cross each affine piece at most once, so for bounds
    whose pieces meet continuously this decides line >= b on the whole
    domain exactly; at explicit discontinuities the breakpoint value is
    the lower one-sided value, matching how dual lines are extracted.
    """
    vname = b.variable
    for x in b.breakpoints():
        v = b.value_at(x)
        if v is None or v == NEG_INF:
            continue
        if line.evaluate({vname: x}) < v:
            return False
    return True
