"""Zero-density exponent bounds A(sigma) derived from large-value regions.

The bridge is: A(sigma)(1 - sigma) is at most the larger of
sup LV_zeta(sigma, tau)/tau over a low tau window and
sup LV(sigma, tau)/tau over a high window, with power-raising covering all
larger tau.  Three window variants are implemented (the machine-friendly
[tau0, 2 tau0], the human-friendly [2 tau0/3, tau0] with zeta side up to
4 tau0/3, and the Montgomery-hypothesis shortcut).  On top of that sit the
exponent-pair route of Bourgain's zero-density theorem and its exact
linear-fractional optimization over the hull of known pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import large_values as lv_mod
from .expairs import ExponentPair
from .geometry import (AffineForm, Polytope, Region, affine, box, eq, ge, le,
                       polytope, region, var)
from .large_values import (LVBoundSet, LV, LVZ, RHO, SIGMA, TAU, TAU_MAX,
                           combined_region, minus_infinity_intervals)
from .num import NEG_INF, POS_INF, Q, qstr
from .piecewise import PiecewiseBound, Piece


# -- linear-fractional table values ------------------------------------------

@dataclass(frozen=True)
class LinFrac:
    """num / (a sigma + b) with positive denominator on its range."""
    num: Fraction
    a: Fraction
    b: Fraction

    def value(self, sigma: Fraction) -> Fraction:
        den = self.a * Q(sigma) + self.b
        if den <= 0:
            return POS_INF
        return self.num / den

    def crossing(self, other: "LinFrac") -> Optional[Fraction]:
        """Rational crossing point of two constant-numerator fractions."""
        a = self.num * other.a - other.num * self.a
        b = self.num * other.b - other.num * self.b
        if a == 0:
            return None
        return -b / a

    def __str__(self) -> str:
        return f"{qstr(self.num)}/({qstr(self.a)}*sigma + {qstr(self.b)})"


@dataclass(frozen=True)
class DensityRecord:
    hid: str
    frac: LinFrac
    lo: Fraction
    hi: Fraction
    citation: str
    derived_by: str = ""     # nonempty for rows the engine re-derives
    conditional: bool = False


def _pintz_family(n_max: int = 12) -> list[DensityRecord]:
    rows = []
    for n in range(6, n_max + 1):
        nq = Q(n)
        rows.append(DensityRecord(
            f"zd-pintz-n{n}",
            LinFrac(Q(3), 2 * nq * (nq - 1), -nq * (2 * nq - 3)),
            1 - 1 / (2 * nq * (nq - 1)), 1 - 1 / (2 * nq * (nq + 1)),
            "Pintz (2023), Theorem 1"))
    return rows


def density_table_records(n_max: int = 12) -> list[DensityRecord]:
    R = DensityRecord
    rows = [
        R("zd-ingham", LinFrac(Q(3), Q(-1), Q(2)), Q(1, 2), Q(7, 10),
          "Ingham (1940)", derived_by="ingham"),
        R("zd-guth-maynard", LinFrac(Q(15), Q(5), Q(3)), Q(7, 10), Q(19, 25),
          "Guth-Maynard (2024)", derived_by="guth_maynard"),
        R("zd-ivic-1", LinFrac(Q(9), Q(8), Q(-2)), Q(19, 25), Q(127, 167),
          "Ivic (1985), Theorem 11.4"),
        R("zd-ivic-2", LinFrac(Q(15), Q(13), Q(-3)), Q(127, 167), Q(13, 17),
          "Ivic (1985), Theorem 11.4"),
        R("zd-ivic-3", LinFrac(Q(6), Q(5), Q(-1)), Q(13, 17), Q(17, 22),
          "Ivic (1985), Theorem 11.4"),
        R("zd-bourgain-improved-a", LinFrac(Q(2), Q(9), Q(-6)), Q(17, 22), Q(41, 53),
          "optimized second Bourgain large-values bound",
          derived_by="bourgain_improved"),
        R("zd-ivic-4", LinFrac(Q(9), Q(7), Q(-1)), Q(41, 53), Q(7, 9),
          "Ivic (1985), Theorem 11.4"),
        R("zd-bourgain-improved-b", LinFrac(Q(9), Q(16), Q(-8)), Q(7, 9), Q(1867, 2347),
          "optimized second Bourgain large-values bound",
          derived_by="bourgain_improved"),
        R("zd-bourgain2000", LinFrac(Q(3), Q(2), Q(0)), Q(1867, 2347), Q(4, 5),
          "Bourgain (2000)"),
        R("zd-ivic-5", LinFrac(Q(3), Q(2), Q(0)), Q(4, 5), Q(7, 8),
          "Ivic (1985), Theorem 11.4"),
        R("zd-heath-brown", LinFrac(Q(3), Q(10), Q(-7)), Q(7, 8), Q(279, 314),
          "Heath-Brown (1979)"),
        R("zd-cdv", LinFrac(Q(24), Q(30), Q(-11)), Q(279, 314), Q(155, 174),
          "Chen-Debruyne-Vindas (2024)"),
        R("zd-ivic-6", LinFrac(Q(24), Q(30), Q(-11)), Q(155, 174), Q(9, 10),
          "Ivic (1985), Theorem 11.2"),
        R("zd-hb-improved", LinFrac(Q(3), Q(10), Q(-7)), Q(9, 10), Q(31, 34),
          "Heath-Brown large values + mu(7/10) <= 3/40",
          derived_by="hb_improved"),
        R("zd-bzd-opt-1", LinFrac(Q(11), Q(48), Q(-36)), Q(31, 34), Q(14, 15),
          "optimized Bourgain zero-density bound", derived_by="bourgain_opt"),
        R("zd-bzd-opt-2", LinFrac(Q(391), Q(2493), Q(-2014)), Q(14, 15), Q(2841, 3016),
          "optimized Bourgain zero-density bound", derived_by="bourgain_opt"),
        R("zd-bzd-opt-3", LinFrac(Q(22232), Q(163248), Q(-134765)), Q(2841, 3016), Q(859, 908),
          "optimized Bourgain zero-density bound", derived_by="bourgain_opt"),
        R("zd-bzd-opt-4", LinFrac(Q(356), Q(2742), Q(-2279)), Q(859, 908), Q(23, 24),
          "optimized Bourgain zero-density bound", derived_by="bourgain_opt"),
        R("zd-pintz-a", LinFrac(Q(3), Q(24), Q(-20)), Q(23, 24), Q(2211487, 2274732),
          "Pintz (2023), Theorem 1"),
        R("zd-bzd-opt-8", LinFrac(Q(86152), Q(1447460), Q(-1311509)),
          Q(2211487, 2274732), Q(39, 40),
          "optimized Bourgain zero-density bound", derived_by="bourgain_opt"),
        R("zd-pintz-b", LinFrac(Q(2), Q(15), Q(-12)), Q(39, 40), Q(41, 42),
          "Pintz (2023), Theorem 1"),
        R("zd-pintz-c", LinFrac(Q(3), Q(40), Q(-35)), Q(41, 42), Q(59, 60),
          "Pintz (2023), Theorem 1"),
    ]
    return rows + _pintz_family(n_max)


# -- sup rho/tau machinery ------------------------------------------------------

@dataclass
class Derivation:
    """A(sigma) bound with the per-step diagnostics of the window suprema."""
    sigma: Fraction
    bound: object                 # Fraction or +inf
    tau0: Optional[Fraction]
    lv_sup: object = None
    lvz_sup: object = None
    inputs: tuple = ()
    rule: str = ""
    conditional: bool = False
    note: str = ""


def _finite(hyps: Sequence[LVBoundSet]) -> list[LVBoundSet]:
    return [h for h in hyps if not getattr(h, "pure_minus_infinity", False)]


def sup_ratio_window(hyps: Sequence[LVBoundSet], sigma: Fraction,
                     lo: Fraction, hi: Fraction):
    """Exact sup of rho/tau over the combined region on sigma-slice, tau in [lo, hi].

    Minus-infinity zones are removed first; a window entirely inside them
    gives -inf.  Returns +inf when no finite hypothesis constrains part of
    the window.
    """
    sigma, lo, hi = Q(sigma), Q(lo), Q(hi)
    if lo > hi:
        return NEG_INF
    minf = minus_infinity_intervals(hyps, sigma)
    segments = [(lo, hi)]
    for a, b in minf:
        nxt = []
        for s0, s1 in segments:
            if b < s0 or a > s1:
                nxt.append((s0, s1))
                continue
            if a > s0:
                nxt.append((s0, a))
            if b < s1:
                nxt.append((b, s1))
        segments = nxt
    if not segments:
        return NEG_INF
    finite = _finite(hyps)
    if not finite:
        return POS_INF
    best = NEG_INF
    for s0, s1 in segments:
        reg = _windowed_region(finite, sigma, s0, s1)
        val = reg.maximize_ratio(RHO, TAU)
        if val == POS_INF:
            return POS_INF
        if val != NEG_INF and (best == NEG_INF or val > best):
            best = val
    return best


def _windowed_region(finite: Sequence[LVBoundSet], sigma: Fraction,
                     lo: Fraction, hi: Fraction) -> Region:
    """Intersection of the sigma-sliced hypotheses restricted to a tau window.

    Slicing and windowing first lets empty piece combinations die early,
    which keeps the piece count of big intersections (Bourgain presets)
    manageable.
    """
    win = [ge(TAU, lo), le(TAU, hi)]
    regs = [h.region.substitute({"sigma": sigma}).with_constraints(win).drop_empty()
            for h in finite]
    regs.sort(key=lambda r: len(r.pieces))
    reg = regs[0]
    for r in regs[1:]:
        reg = reg.intersect(r)
    return reg


def sup_rho_window(hyps: Sequence[LVBoundSet], sigma: Fraction,
                   lo: Fraction, hi: Fraction):
    """Exact sup of rho over the combined region, tau in [lo, hi]."""
    sigma, lo, hi = Q(sigma), Q(lo), Q(hi)
    finite = _finite(hyps)
    if not finite:
        return POS_INF
    return _windowed_region(finite, sigma, lo, hi).maximize(RHO)


def _close_lv(lv: Sequence[LVBoundSet], max_power: int,
              use_subdivide: bool) -> list[LVBoundSet]:
    out = list(lv)
    for h in lv:
        if h.kind != LV:
            raise ValueError(f"{h.hid} is not an LV hypothesis")
        for k in range(2, max_power + 1):
            out.append(lv_mod.raise_power(h, k))
    if use_subdivide:
        out = [lv_mod.subdivide(h) for h in out]
    return out


def a_from_lv(sigma: Fraction, tau0: Fraction, lv: Sequence[LVBoundSet],
              lvz: Sequence[LVBoundSet] = (), max_power: int = 1,
              use_subdivide: bool = False) -> Derivation:
    """A(sigma)(1-sigma) <= max(sup_{2<=tau<tau0} LVz/tau, sup_{tau0<=tau<=2tau0} LV/tau).

    Both suprema are computed over closed windows (sups over closures of
    half-open ranges agree for this data); a vacuous zeta window is -inf.
    """
    sigma, tau0 = Q(sigma), Q(tau0)
    if not (Q(1, 2) < sigma < 1 and tau0 > 0):
        raise ValueError("need 1/2 < sigma < 1 and tau0 > 0")
    lv_closed = _close_lv(lv, max_power, use_subdivide)
    lv_sup = sup_ratio_window(lv_closed, sigma, tau0, 2 * tau0)
    lvz_sup = sup_ratio_window(list(lvz), sigma, Q(2), tau0) if tau0 > 2 else NEG_INF
    top = max(lv_sup, lvz_sup)
    if top == POS_INF:
        side = "LV" if lv_sup == POS_INF else "LV_zeta"
        return Derivation(sigma, POS_INF, tau0, lv_sup, lvz_sup,
                          tuple(h.hid for h in list(lv) + list(lvz)), "a_from_lv",
                          any(h.conditional for h in list(lv) + list(lvz)),
                          f"no finite {side} hypothesis covers the window")
    bound = top / (1 - sigma) if top != NEG_INF else NEG_INF
    return Derivation(sigma, bound, tau0, lv_sup, lvz_sup,
                      tuple(h.hid for h in list(lv) + list(lvz)), "a_from_lv",
                      any(h.conditional for h in list(lv) + list(lvz)))


def a_from_lv_cor(sigma: Fraction, tau0: Fraction, lv: Sequence[LVBoundSet],
                  lvz: Sequence[LVBoundSet] = (), max_power: int = 1,
                  use_subdivide: bool = False) -> Derivation:
    """Variant with windows [2 tau0/3, tau0] (LV) and [2, 4 tau0/3) (zeta)."""
    sigma, tau0 = Q(sigma), Q(tau0)
    if not (Q(1, 2) < sigma < 1 and tau0 > 0):
        raise ValueError("need 1/2 < sigma < 1 and tau0 > 0")
    lv_closed = _close_lv(lv, max_power, use_subdivide)
    lv_sup = sup_ratio_window(lv_closed, sigma, 2 * tau0 / 3, tau0)
    hi = 4 * tau0 / 3
    lvz_sup = sup_ratio_window(list(lvz), sigma, Q(2), hi) if hi > 2 else NEG_INF
    top = max(lv_sup, lvz_sup)
    if top == POS_INF:
        side = "LV" if lv_sup == POS_INF else "LV_zeta"
        return Derivation(sigma, POS_INF, tau0, lv_sup, lvz_sup,
                          tuple(h.hid for h in list(lv) + list(lvz)), "a_from_lv_cor",
                          any(h.conditional for h in list(lv) + list(lvz)),
                          f"no finite {side} hypothesis covers the window")
    bound = top / (1 - sigma) if top != NEG_INF else NEG_INF
    return Derivation(sigma, bound, tau0, lv_sup, lvz_sup,
                      tuple(h.hid for h in list(lv) + list(lvz)), "a_from_lv_cor",
                      any(h.conditional for h in list(lv) + list(lvz)))


def a_from_lv_cor2(sigma: Fraction, tau0: Fraction, lv: Sequence[LVBoundSet],
                   lvz: Sequence[LVBoundSet] = ()) -> Optional[Derivation]:
    """Target-form check: both window sups at most (3-3 sigma)/tau0 gives
    A(sigma) <= 3/tau0; returns None when a check fails."""
    sigma, tau0 = Q(sigma), Q(tau0)
    d = a_from_lv_cor(sigma, tau0, lv, lvz)
    target = (3 - 3 * sigma) / tau0
    for sup in (d.lv_sup, d.lvz_sup):
        if sup == POS_INF or (sup != NEG_INF and sup > target):
            return None
    return Derivation(sigma, 3 / tau0, tau0, d.lv_sup, d.lvz_sup, d.inputs,
                      "a_from_lv_cor2", d.conditional)


def a_from_lv_cor3(sigma: Fraction, tau0: Fraction, lv: Sequence[LVBoundSet],
                   lvz: Sequence[LVBoundSet] = ()) -> Optional[Derivation]:
    """Montgomery-hypothesis form: if LV <= 2-2 sigma up to tau0 + sigma - 1
    and the zeta window obeys the (3-3 sigma) tau/tau0 target, then
    A(sigma) <= 3/tau0.  Subdivision is internalized: the Montgomery piece
    extends at unit slope, which the target absorbs for tau0 >= 3-3 sigma.
    """
    sigma, tau0 = Q(sigma), Q(tau0)
    if not (Q(1, 2) < sigma < 1 and tau0 > 0):
        raise ValueError("need 1/2 < sigma < 1 and tau0 > 0")
    cond = any(h.conditional for h in list(lv) + list(lvz))
    inputs = tuple(h.hid for h in list(lv) + list(lvz))
    if tau0 < 3 - 3 * sigma:
        # A(sigma)(1-sigma) <= 1 suffices: 1 <= (3/tau0)(1-sigma).
        return Derivation(sigma, 3 / tau0, tau0, None, None, inputs,
                          "a_from_lv_cor3", cond, "trivial route (tau0 < 3-3sigma)")
    edge = tau0 + sigma - 1
    if edge < 0:
        return None
    mont = sup_rho_window(list(lv), sigma, Q(0), edge)
    if mont == POS_INF or (mont != NEG_INF and mont > 2 - 2 * sigma):
        return None
    hi = 4 * tau0 / 3
    lvz_sup = sup_ratio_window(list(lvz), sigma, Q(2), hi) if hi > 2 else NEG_INF
    target = (3 - 3 * sigma) / tau0
    if lvz_sup == POS_INF or (lvz_sup != NEG_INF and lvz_sup > target):
        return None
    return Derivation(sigma, 3 / tau0, tau0, mont, lvz_sup, inputs,
                      "a_from_lv_cor3", cond)


def optimize_tau0(sigma: Fraction, lv: Sequence[LVBoundSet],
                  lvz: Sequence[LVBoundSet] = (),
                  candidates: Optional[Sequence[Fraction]] = None,
                  grid: int = 0) -> tuple[Optional[Fraction], object, Optional[Derivation]]:
    """Best tau0 among the candidates (ties resolved to the smallest tau0)."""
    sigma = Q(sigma)
    if candidates is None:
        candidates = [2 - sigma, 3 * sigma - 1, 10 * sigma - 7,
                      (3 + 5 * sigma) / 5, 8 * (2 * sigma - 1) / 3,
                      9 * (3 * sigma - 2) / 2]
        if grid:
            candidates += [Q(j, grid) for j in range(1, 4 * grid)]
    best: Optional[Derivation] = None
    best_tau0 = None
    for t0 in sorted(set(Q(c) for c in candidates if Q(c) > 0)):
        d = a_from_lv_cor(sigma, t0, lv, lvz)
        if d.bound == POS_INF or d.bound == NEG_INF:
            continue
        if best is None or d.bound < best.bound:
            best, best_tau0 = d, t0
    return best_tau0, (best.bound if best else POS_INF), best


# -- Bourgain's exponent-pair zero-density theorem -----------------------------

def bourgain_zd(p: ExponentPair, sigma: Fraction):
    """A(sigma) <= 4k/(2(1+k) sigma - 1 - l) under the stated strict conditions.

    Returns (value, "") or (None, reason); boundary cases are inapplicable
    because every inequality in the statement is strict.
    """
    sigma = Q(sigma)
    k, l = p.k, p.l
    if not k < Q(1, 5):
        return None, f"needs k < 1/5 (k = {qstr(k)})"
    if not l > Q(3, 5):
        return None, f"needs l > 3/5 (l = {qstr(l)})"
    if not 15 * l + 20 * k > 13:
        return None, "needs 15 l + 20 k > 13"
    if not sigma > (l + 1) / (2 * (k + 1)):
        return None, f"needs sigma > (l+1)/(2(k+1)) = {qstr((l + 1) / (2 * (k + 1)))}"
    if k < Q(11, 85):
        pass
    elif k > Q(11, 85):
        thr = (144 * k - 11 * l - 11) / (170 * k - 22)
        if not sigma > thr:
            return None, f"needs sigma > {qstr(thr)} for k > 11/85"
    else:
        return None, "k = 11/85 exactly: both side conditions are strict"
    den = 2 * (1 + k) * sigma - 1 - l
    return 4 * k / den, ""


def _hull_halfspaces(pts: Sequence[tuple[Fraction, Fraction]]):
    """Inward halfspaces of the convex hull of 2-D points (k, l)."""
    pts = sorted(set(pts))
    if len(pts) == 1:
        (x, y) = pts[0]
        return [eq(affine({"k": 1}, -x)), eq(affine({"l": 1}, -y))]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    hull = lower[:-1] + upper[:-1]
    if len(hull) <= 2:
        # Collinear set: the hull is the segment between the extremes.
        (x0, y0), (x1, y1) = pts[0], pts[-1]
        line = affine({"k": y0 - y1, "l": x1 - x0},
                      -(y0 - y1) * x0 - (x1 - x0) * y0)
        direction = affine({"k": x1 - x0, "l": y1 - y0})
        d0 = direction.evaluate({"k": x0, "l": y0})
        d1 = direction.evaluate({"k": x1, "l": y1})
        return [eq(line), ge(direction, d0), le(direction, d1)]
    cons = []
    n = len(hull)
    for i in range(n):
        (x0, y0), (x1, y1) = hull[i], hull[(i + 1) % n]
        # inward halfspace for a counter-clockwise hull edge
        form = affine({"k": y0 - y1, "l": x1 - x0},
                      -(y0 - y1) * x0 - (x1 - x0) * y0)
        cons.append(ge(form))
    return cons


def optimize_bourgain_zd(sigma: Fraction, pairs: Sequence[ExponentPair]):
    """Exact minimum of 4k/(2(1+k) sigma - 1 - l) over the closure of the
    theorem's applicability region intersected with the hull of known pairs.

    Linear-fractional with positive denominator, so the optimum sits at a
    vertex; vertices are enumerated exactly.  Boundary points (for example
    k = 11/85) are allowed here: the optimization runs over the closure.
    Returns (point, value) or (None, None) when infeasible.
    """
    sigma = Q(sigma)
    from .expairs import _polygon_vertices
    hull = _hull_halfspaces([(p.k, p.l) for p in pairs])
    base = [ge(var("k")), le(var("k"), Q(1, 5)),
            ge(var("l"), Q(3, 5)), le(var("l"), Q(1)),
            ge(affine({"k": 20, "l": 15}, -13)),
            ge(affine({"k": 2 * sigma, "l": -1}, 2 * sigma - 1))]
    s1 = base + [le(var("k"), Q(11, 85))]
    s2 = base + [ge(var("k"), Q(11, 85)),
                 ge(affine({"k": 170 * sigma - 144, "l": 11}, 11 - 22 * sigma))]
    best_val, best_pt = None, None
    for cons in (s1, s2):
        poly = polytope(("k", "l"), cons + hull)
        for (k, l) in _polygon_vertices(poly):
            den = 2 * (1 + k) * sigma - 1 - l
            if den <= 0:
                continue
            val = 4 * k / den
            if best_val is None or val < best_val or \
                    (val == best_val and (k, l) < best_pt):
                best_val, best_pt = val, (k, l)
    return best_pt, best_val
