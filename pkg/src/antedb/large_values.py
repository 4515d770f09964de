"""Large-value exponent regions LV(sigma, tau) and LV_zeta(sigma, tau).

Each hypothesis is a region over (sigma, tau, rho) containing every tuple
achievable by a large value pattern, so "rho <= max(e_1, ..., e_n)" becomes
a union of polytopes and combining theorems is region intersection.  Slices
at fixed (sigma, tau) are intervals [0, bound], capped by the trivial
rho <= tau, except for implication-style hypotheses (Bourgain's second
large values theorem) whose escape pieces are not downward closed.

Genuinely impossible zones (the bound is -inf) are kept as a separate
region over (sigma, tau); an empty slice means -inf, never 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import (AffineForm, Halfspace, Polytope, Region, affine, box,
                       eq, ge, le, polytope, region, var)
from .num import NEG_INF, POS_INF, Q, qstr

LV = "LV"
LVZ = "LVZ"

VARS = ("sigma", "tau", "rho")
SIGMA, TAU, RHO = var("sigma"), var("tau"), var("rho")

# tau never needs to exceed this in any shipped derivation; it keeps every
# stored region bounded so exact LP queries are total.
TAU_MAX = Q(100)


def _domain(tau_min=Q(0)) -> list[Halfspace]:
    return (box(VARS, {"sigma": (Q(1, 2), Q(1)), "tau": (tau_min, TAU_MAX)})
            + [ge(RHO), le(RHO, TAU)])


@dataclass(frozen=True)
class LVBoundSet:
    hid: str
    kind: str
    region: Region
    minus_infinity: Region = field(
        default_factory=lambda: Region(("sigma", "tau"), ()))
    conditional: bool = False
    citation: str = ""

    def bound_at(self, sigma: Fraction, tau: Fraction):
        """sup rho over the (sigma, tau) slice; -inf inside impossible zones."""
        pt = {"sigma": Q(sigma), "tau": Q(tau)}
        if self.minus_infinity.contains(pt):
            return NEG_INF
        sliced = self.region.substitute(pt)
        return sliced.maximize(RHO)


def _branch_region(branches: Sequence[AffineForm], tau_min=Q(0),
                   extra: Sequence[Halfspace] = ()) -> Region:
    dom = _domain(tau_min) + list(extra)
    pieces = [polytope(VARS, dom + [le(RHO, b)]) for b in branches]
    return region(VARS, pieces)


def l2_mvt() -> LVBoundSet:
    """Mean value theorem for Dirichlet polynomials: rho <= max(2-2s, 1+t-2s)."""
    return LVBoundSet("lv-l2-mvt", LV,
                      _branch_region([const_form(2, -2), TAU + const_form(1, -2)]),
                      citation="L^2 mean value theorem")


def const_form(c, sigma_coeff=0, tau_coeff=0) -> AffineForm:
    return affine({"sigma": Q(sigma_coeff), "tau": Q(tau_coeff)}, Q(c))


def huxley() -> LVBoundSet:
    return LVBoundSet("lv-huxley", LV,
                      _branch_region([const_form(2, -2), TAU + const_form(4, -6)]),
                      citation="Huxley (1972) large values theorem")


def heath_brown() -> LVBoundSet:
    return LVBoundSet("lv-heath-brown", LV,
                      _branch_region([const_form(2, -2), TAU + const_form(10, -13)]),
                      citation="Heath-Brown (1979) large values theorem")


def jutila(k: int) -> LVBoundSet:
    if k < 1:
        raise ValueError("Jutila parameter k must be a positive integer")
    kq = Q(k)
    return LVBoundSet(
        f"lv-jutila-k{k}", LV,
        _branch_region([const_form(2, -2),
                        TAU + const_form(4 - 2 / kq, -(6 - 2 / kq)),
                        TAU + const_form(6 * kq, -8 * kq)]),
        citation=f"Jutila (1977) large values theorem, k = {k}")


def guth_maynard() -> LVBoundSet:
    return LVBoundSet(
        "lv-guth-maynard", LV,
        _branch_region([const_form(2, -2), const_form(Q(18, 5), -4),
                        TAU + const_form(Q(12, 5), -4)]),
        citation="Guth-Maynard (2024), Theorem 1.1")


def montgomery_conjecture() -> LVBoundSet:
    return LVBoundSet("lv-montgomery", LV, _branch_region([const_form(2, -2)]),
                      conditional=True, citation="Montgomery conjecture")


def trivial() -> LVBoundSet:
    return LVBoundSet("lv-trivial", LV, _branch_region([TAU]),
                      citation="1-separated set in an interval of length T")


def lv_constructor(name: str, **kwargs) -> LVBoundSet:
    table = {"l2_mvt": l2_mvt, "huxley": huxley, "heath_brown": heath_brown,
             "guth_maynard": guth_maynard, "montgomery_conjecture": montgomery_conjecture,
             "trivial": trivial}
    if name == "jutila":
        return jutila(kwargs.get("k", 1))
    if name not in table:
        raise ValueError(f"unknown large values constructor {name!r}")
    return table[name]()


# -- Bourgain's second large values theorem ---------------------------------

def _bourgain_branches(a1: AffineForm, a2: AffineForm) -> list[AffineForm]:
    """The five-term bound of part (ii); the inner max(1, 2 tau - 2) makes six."""
    return [
        a2 + const_form(2, -2),
        a1 + Q(1, 2) * a2 + const_form(2, -2),
        -1 * a2 + 2 * TAU + const_form(4, -8),
        -2 * a1 + TAU + const_form(12, -16),
        4 * a1 + const_form(3, -4),
        4 * a1 + 2 * TAU + const_form(0, -4),
    ]


def _rho_escapes() -> list[Polytope]:
    dom = _domain()
    return [polytope(VARS, dom + [ge(RHO, const_form(1))]),
            polytope(VARS, dom + [ge(RHO, const_form(4) - 2 * TAU)])]


def bourgain_ii(alpha1: AffineForm, alpha2: AffineForm,
                hid: str = "lv-bourgain-ii") -> LVBoundSet:
    """Implication region: inside {rho <= 1, rho <= 4 - 2 tau} and where both
    parameter forms are nonnegative, rho is bounded by the six-branch
    maximum.  Tuples where rho exceeds the guard, or a parameter form goes
    negative, land in escape pieces that other hypotheses cap.

    A parameter escape is omitted when the form is provably nonnegative on
    the whole domain (otherwise an identically-zero form would void the
    hypothesis: the closed escape {form <= 0} would be everything).
    """
    a1, a2 = alpha1, alpha2
    dom = _domain()
    guards = [le(RHO, const_form(1)), le(RHO, const_form(4) - 2 * TAU),
              ge(a1), ge(a2)]
    pieces = [polytope(VARS, dom + guards + [le(RHO, b)])
              for b in _bourgain_branches(a1, a2)]
    escapes = _rho_escapes()
    shadow = polytope(("sigma", "tau"),
                      box(("sigma", "tau"), {"sigma": (Q(1, 2), Q(1)),
                                             "tau": (Q(0), TAU_MAX)}))
    for a in (a1, a2):
        amin, _ = shadow.minimize(a)
        if amin < 0:
            escapes.append(polytope(VARS, dom + [le(a, const_form(0))]))
    return LVBoundSet(hid, LV, region(VARS, pieces + escapes),
                      citation="Bourgain (2000) large values theorem, part (ii)")


def bourgain_preset(expr2: AffineForm, hid: str) -> LVBoundSet:
    """Clamped optimized parameter choice alpha2 = max(expr2, 0) with
    alpha1 = max(tau/3 - 2(7 sigma - 5)/3 - alpha2/6, 0).

    Each sign pattern of the two clamps is its own guarded case, so the
    parameter forms are nonnegative wherever used and no parameter escapes
    are needed: the clamp boundaries agree from both sides, keeping the
    region exact.  Only the rho <= min(1, 4 - 2 tau) guard keeps escapes.
    """
    base = Q(1, 3) * TAU + const_form(Q(10, 3), Q(-14, 3))
    dom = _domain()
    pieces: list[Polytope] = []
    zero = const_form(0)
    for guard2, a2 in ((ge(expr2), expr2), (le(expr2, zero), zero)):
        a1_form = base - Q(1, 6) * a2
        for guard1, a1 in ((ge(a1_form), a1_form), (le(a1_form, zero), zero)):
            guards = [guard2, guard1,
                      le(RHO, const_form(1)), le(RHO, const_form(4) - 2 * TAU)]
            for b in _bourgain_branches(a1, a2):
                pieces.append(polytope(VARS, dom + guards + [le(RHO, b)]))
    return LVBoundSet(hid, LV, region(VARS, pieces + _rho_escapes()),
                      citation="Bourgain (2000) large values theorem, part (ii), "
                               "optimized parameters")


def bourgain_presets() -> list[LVBoundSet]:
    """The two optimized positive-part choices used in the improved
    density-hypothesis derivation."""
    return [
        bourgain_preset(Q(5, 4) * TAU - const_form(1, 1), "lv-bourgain-ii:a"),
        bourgain_preset(TAU + const_form(11, -16), "lv-bourgain-ii:b"),
    ]


# -- functional transforms ----------------------------------------------------

def subdivide(b: LVBoundSet) -> LVBoundSet:
    """Huxley subdivision: extend each piece past its tau range at unit slope.

    From a bound valid at tau1 one gets bound(tau1) + (tau - tau1) at any
    tau >= tau1.  Each polytope piece has a concave slice-supremum, so the
    best shift source is the piece's upper tau boundary; for every
    constraint bounding tau from above we pin the source to that edge
    (slack variables t1 = source tau, t2 = source rho, then projection) and
    let rho grow at unit slope beyond it.  The result is 1-Lipschitz from
    above in tau, monotone, and idempotent up to semantic equality.

    Only valid for LV: zeta patterns cannot be shifted to a subinterval.
    """
    if b.kind != LV:
        raise ValueError("subdivision is not available for LV_zeta")
    pieces = []
    for p in b.region.pieces:
        pieces.append(p)
        renamed = p.rename({"tau": "t1", "rho": "t2"})
        for h in renamed.constraints:
            coeff = h.form.coeff("t1")
            if coeff >= 0 and not h.equality:
                continue  # not an upper boundary for the source tau
            lifted = Polytope(("sigma", "t1", "t2", "tau", "rho"),
                              renamed.constraints + tuple(
                                  [eq(h.form),
                                   ge(TAU, var("t1")),
                                   ge(RHO),
                                   le(RHO, var("t2") + TAU - var("t1")),
                                   le(TAU, TAU_MAX)]))
            proj = lifted.project(VARS)
            if not proj.is_empty():
                pieces.append(proj)
    return LVBoundSet(f"subdivide({b.hid})", LV,
                      Region(VARS, tuple(pieces)),
                      b.minus_infinity, b.conditional,
                      f"Huxley subdivision of {b.hid}")


def raise_power(b: LVBoundSet, k: int) -> LVBoundSet:
    """LV(sigma, k tau) <= k LV(sigma, tau): image under (tau, rho) -> k (tau, rho)."""
    if b.kind != LV:
        raise ValueError("raising to a power applies to LV hypotheses")
    if k < 1:
        raise ValueError("power must be a positive integer")
    if k == 1:
        return b
    kq = Q(k)
    pieces = []
    for p in b.region.pieces:
        img = p.scale_vars({"tau": kq, "rho": kq})
        pieces.append(img.with_constraints([le(TAU, TAU_MAX)]))
    return LVBoundSet(f"raise_power({b.hid},{k})", LV, Region(VARS, tuple(pieces)),
                      b.minus_infinity.scale_vars({"tau": kq}) if b.minus_infinity.pieces
                      else b.minus_infinity,
                      b.conditional, f"power {k} applied to {b.hid}")


# -- zeta-side constructors ---------------------------------------------------

def lvz_from_moment(sigma0: Fraction, A: Fraction, M: Fraction,
                    hid: str = "", citation: str = "") -> LVBoundSet:
    """A moment estimate int |zeta(sigma0 + it)|^A << T^(M+o(1)) gives
    rho <= tau M - A (sigma - sigma0) for tau >= 2."""
    sigma0, A, M = Q(sigma0), Q(A), Q(M)
    if not (Q(1, 2) <= sigma0 <= 1 and A >= 1):
        raise ValueError("moment bound needs 1/2 <= sigma0 <= 1 and A >= 1")
    form = M * TAU - A * (SIGMA - const_form(sigma0))
    return LVBoundSet(hid or f"lvz-moment({qstr(sigma0)},{qstr(A)},{qstr(M)})", LVZ,
                      _branch_region([form], tau_min=Q(2)),
                      citation=citation or "moment estimate for zeta")


def twelfth_moment() -> LVBoundSet:
    return lvz_from_moment(Q(1, 2), Q(12), Q(2), "lvz-twelfth-moment",
                           "Heath-Brown (1978) twelfth moment bound")


def lvz_from_mu(sigma0: Fraction, value: Fraction, hid: str = "",
                citation: str = "", conditional: bool = False) -> LVBoundSet:
    """mu(sigma0) <= value forces LV_zeta = -inf for sigma > sigma0 + tau value.

    The impossible zone is stored closed ({sigma >= sigma0 + value tau});
    the boundary is included only as the closure convention for suprema
    over half-open tau ranges, which is all it is ever used for.
    """
    sigma0, value = Q(sigma0), Q(value)
    minf = region(("sigma", "tau"), [polytope(
        ("sigma", "tau"),
        box(("sigma", "tau"), {"sigma": (Q(1, 2), Q(1)), "tau": (Q(0), TAU_MAX)})
        + [ge(var("sigma") - value * var("tau"), Q(sigma0))])])
    full = _branch_region([TAU])
    return LVBoundSet(hid or f"lvz:mu({qstr(sigma0)},{qstr(value)})", LVZ, full,
                      minf, conditional,
                      citation or f"pointwise bound mu({qstr(sigma0)}) <= {qstr(value)}")


def lvz_reflect(b: LVBoundSet, tau: Fraction, unsound_simplified: bool = False) -> LVBoundSet:
    """Reflection of a zeta large-value bound from the tau line to tau/(tau-1).

    Sup form: the reflected bound at (1/2 + (sigma - 1/2)(tau - 1)^-1-image
    coordinates) is sup over sigma' in [sigma_low, 1] of
    (bound(sigma', tau) + sigma' - sigma_low) / (tau - 1), realized with a
    slack variable for sigma' and projection; exact for the fixed input tau.

    unsound_simplified drops the supremum and reflects pointwise; that form
    relies on a monotonicity hypothesis that is not proved, so it is opt-in.
    """
    if b.kind != LVZ:
        raise ValueError("reflection applies to LV_zeta hypotheses")
    tau = Q(tau)
    if tau <= 1:
        raise ValueError("reflection needs tau > 1")
    tau_img = tau / (tau - 1)
    # sigma_low(sigma) = 1/2 + (tau - 1)(sigma - 1/2), inverse of the map.
    sigma_low = (tau - 1) * SIGMA + const_form(Q(1, 2) - (tau - 1) / 2)
    pieces = []
    for p in b.region.pieces:
        sliced = p.substitute({"tau": tau})
        if sliced.is_empty():
            continue
        renamed = sliced.rename({"sigma": "t1", "rho": "t2"})
        if unsound_simplified:
            cons = renamed.constraints + tuple([
                eq(var("t1"), sigma_low),
                eq(TAU, const_form(tau_img)),
                ge(RHO), le((tau - 1) * RHO, var("t2")),
                ge(SIGMA, Q(1, 2)), le(SIGMA, Q(1))])
        else:
            cons = renamed.constraints + tuple([
                ge(var("t1"), sigma_low), le(var("t1"), const_form(1)),
                eq(TAU, const_form(tau_img)),
                ge(RHO),
                le((tau - 1) * RHO, var("t2") + var("t1") - sigma_low),
                ge(SIGMA, Q(1, 2)), le(SIGMA, Q(1))])
        lifted = Polytope(("sigma", "t1", "t2", "tau", "rho"), cons)
        pieces.append(lifted.project(VARS))
    return LVBoundSet(f"lvz_reflect({b.hid},{qstr(tau)})", LVZ,
                      Region(VARS, tuple(pieces)).drop_empty(),
                      conditional=b.conditional,
                      citation=f"reflection (approximate functional equation) of {b.hid}")


def lvz_from_zero_density(a_bound, sigma: Fraction, hid: str = "",
                          conditional: bool = False) -> LVBoundSet:
    """Zero-density data caps zeta large values at a fixed sigma:
    rho <= tau * max(1/2, sup_{sigma'} A(sigma')(1 - sigma') + (sigma' - sigma)/2).

    a_bound is a piecewise bound (in sigma) on A; per piece the inner
    objective is an exact rational quadratic, so the supremum over the
    piece is attained at an endpoint or the interior vertex.
    """
    sigma = Q(sigma)
    best = Q(1, 2)
    for piece in a_bound.pieces:
        lo, hi = max(piece.lo, sigma), min(piece.hi, Q(1))
        if lo > hi:
            continue
        p0 = piece.form.const
        q0 = piece.form.coeff("sigma")
        # g(x) = (p0 + q0 x)(1 - x) + (x - sigma)/2
        def g(x):
            return (p0 + q0 * x) * (1 - x) + (x - sigma) / 2
        cands = [g(lo), g(hi)]
        if q0 != 0:
            vertex = (q0 - p0 + Q(1, 2)) / (2 * q0)
            if lo < vertex < hi:
                cands.append(g(vertex))
        best = max(best, *cands)
    form = best * TAU
    pieces = [polytope(VARS, _domain() + [eq(SIGMA, const_form(sigma)), le(RHO, form)])]
    return LVBoundSet(hid or f"lvz:zero-density(sigma={qstr(sigma)})", LVZ,
                      region(VARS, pieces), conditional=conditional,
                      citation="large values from zero density (Matomaki-Teravainen)")


# -- combined queries ---------------------------------------------------------

def combined_region(hyps: Sequence[LVBoundSet]) -> Region:
    if not hyps:
        raise ValueError("no hypotheses to combine")
    reg = hyps[0].region
    for h in hyps[1:]:
        reg = reg.intersect(h.region)
    return reg


def minus_infinity_intervals(hyps: Sequence[LVBoundSet], sigma: Fraction
                             ) -> list[tuple[Fraction, Fraction]]:
    """Merged tau-intervals where some hypothesis gives -inf at this sigma."""
    ivs = []
    for h in hyps:
        for p in h.minus_infinity.pieces:
            sl = p.substitute({"sigma": Q(sigma)})
            if sl.is_empty():
                continue
            lo, _ = sl.minimize(TAU)
            hi, _ = sl.maximize(TAU)
            if lo == POS_INF:
                continue
            ivs.append((lo, hi))
    ivs.sort()
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def bound_at(hyps: Sequence[LVBoundSet], sigma: Fraction, tau: Fraction):
    """Best combined bound with provenance: (value, [ids used])."""
    sigma, tau = Q(sigma), Q(tau)
    pt = {"sigma": sigma, "tau": tau}
    for h in hyps:
        if h.minus_infinity.contains(pt):
            return NEG_INF, [h.hid]
    reg = combined_region(hyps)
    value = reg.substitute(pt).maximize(RHO)
    return value, [h.hid for h in hyps]
