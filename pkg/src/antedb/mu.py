"""Bounds on the growth exponent mu(sigma) of zeta on vertical lines.

mu is convex, satisfies mu(1 - sigma) = mu(sigma) + sigma - 1/2, and is
bounded below by max(0, 1/2 - sigma).  Upper bounds are stored as points
(sigma, value); the best piecewise bound is the lower convex envelope of
the reflection-closed point set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .expairs import ExponentPair
from .geometry import affine
from .num import Q, qstr
from .piecewise import PiecewiseBound, Piece


@dataclass(frozen=True)
class MuHypothesis:
    hid: str
    sigma: Fraction
    value: Fraction
    citation: str
    conditional: bool = False

    def __post_init__(self):
        # Unconditional hypotheses must respect the classical lower bound.
        if not self.conditional and self.value < max(Q(0), Q(1, 2) - self.sigma):
            raise ValueError(
                f"mu({qstr(self.sigma)}) <= {qstr(self.value)} violates the lower bound")


def mu_from_pair(p: ExponentPair, hid: str = "", citation: str = "") -> MuHypothesis:
    """An exponent pair (k, l) gives mu(l - k) <= k."""
    return MuHypothesis(hid or f"mu:pair{p}", p.l - p.k, p.k,
                        citation or f"from exponent pair {p}")


ANCHORS = (
    MuHypothesis("mu-anchor-0", Q(0), Q(1, 2), "convexity anchor mu(0) = 1/2"),
    MuHypothesis("mu-anchor-1", Q(1), Q(0), "convexity anchor mu(1) = 0"),
)


def reflect_mu(h: MuHypothesis) -> MuHypothesis:
    """Functional-equation image: mu(1 - sigma) = mu(sigma) + sigma - 1/2."""
    return MuHypothesis(f"mu:reflect({h.hid})", 1 - h.sigma,
                        h.value + h.sigma - Q(1, 2),
                        f"functional equation applied to {h.hid}", h.conditional)


def best_mu(db: Iterable[MuHypothesis],
            interval: tuple = (Q(0), Q(1)),
            include_conditional: bool = False,
            anchors: bool = True) -> PiecewiseBound:
    """Lower convex envelope of the reflection-closed point bounds.

    Convexity of mu makes every chord between point bounds a valid bound,
    so the best piecewise bound is the lower hull.  Each output piece
    carries the two hypotheses spanning its chord.
    """
    hyps = [h for h in db if include_conditional or not h.conditional]
    if anchors:
        hyps = list(ANCHORS) + hyps
    if not hyps:
        raise ValueError("empty mu database")
    closed = list(hyps) + [reflect_mu(h) for h in hyps]
    # Best value per abscissa, remembering which hypothesis gave it.
    best: dict[Fraction, tuple[Fraction, str]] = {}
    for h in closed:
        cur = best.get(h.sigma)
        if cur is None or h.value < cur[0] or (h.value == cur[0] and h.hid < cur[1]):
            best[h.sigma] = (h.value, h.hid)
    pts = sorted((s, v, hid) for s, (v, hid) in best.items())
    hull = _lower_hull(pts)
    lo, hi = Q(interval[0]), Q(interval[1])
    pieces = []
    for (s0, v0, h0), (s1, v1, h1) in zip(hull, hull[1:]):
        a, b = max(s0, lo), min(s1, hi)
        if a > b or s0 == s1:
            continue
        slope = (v1 - v0) / (s1 - s0)
        form = affine({"sigma": slope}, v0 - slope * s0)
        pieces.append(Piece(a, b, form, f"chord({h0},{h1})"))
    if len(hull) == 1 and lo <= hull[0][0] <= hi:
        s0, v0, h0 = hull[0]
        pieces.append(Piece(s0, s0, affine({}, v0), h0))
    return PiecewiseBound("sigma", tuple(pieces))


def _lower_hull(pts: Sequence[tuple]) -> list[tuple]:
    """Andrew's monotone chain, lower hull only, exact rational arithmetic."""
    hull: list[tuple] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1, _), (x2, y2, _) = hull[-2], hull[-1]
            # drop hull[-1] unless it turns strictly upward (keeps convexity)
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def mu_value_at(db: Iterable[MuHypothesis], sigma: Fraction,
                include_conditional: bool = False):
    """Best bound at a point with the provenance of the covering chord."""
    bound = best_mu(db, include_conditional=include_conditional)
    sigma = Q(sigma)
    vals = [(p.value(sigma), p.provenance) for p in bound.pieces if p.covers(sigma)]
    if not vals:
        return None, ""
    return min(vals)
