"""The beta(alpha) bound database and the published-table envelope.

The default database combines:

* the endpoint anchors beta(0) = 0 and beta(1) = 1/2;
* the k = 5 instance of the Heath-Brown (2017) exponential-sum bound;
* the literature table rows (Huxley's Tables 17.1/19.2 and Bourgain's
  (3.18) pieces) as cited data records with their stated alpha ranges;
* the seed exponent pairs of Bourgain (2017), Watt (1989) and
  Trudgian-Yang (2024), their A-process images, and the Sargos D-process
  derivatives certified against the envelope.

The resulting envelope on [0, 1/2] reproduces the published 18-row table;
the lower-envelope computation also covers the printed gap between
199/716 and 120/419 (the AD-derived pair line wins there) and improves on
the printed first row below 74/435, both of which are reported rather than
hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .expairs import (ExponentPair, certify_d_pair, pair, pair_to_beta,
                      process_A, process_B, process_D_bound, verify_combination)
from .geometry import AffineForm, affine
from .num import NEG_INF, Q, qstr
from .piecewise import (PiecewiseBound, Piece, envelope, point_bound,
                        reflect_beta, single)

UNCONDITIONAL = "unconditional"
CONJECTURAL = "conjectural"


@dataclass(frozen=True)
class BetaHypothesis:
    hid: str
    bound: PiecewiseBound
    citation: str
    conditionality: str = UNCONDITIONAL


def heath_brown_beta(k: int) -> BetaHypothesis:
    """beta(alpha) <= alpha + max of the three k-th derivative branches.

    Valid for any integer k >= 3; the bound is the upper envelope of three
    affine branches, returned in explicit piece form on [0, 1].
    """
    if k < 3:
        raise ValueError("Heath-Brown bound needs k >= 3")
    kk = Q(k * (k - 1))
    k2k = Q(k * k * (k - 1))
    hid = f"beta-heath-brown-k{k}"
    branches = [
        affine({"alpha": 1 - Q(k) / kk}, Q(1) / kk),
        affine({"alpha": 1 - Q(1) / kk}),
        affine({"alpha": 1 - Q(2) / kk + Q(2 * k) / k2k}, -Q(2) / k2k),
    ]
    pieces = _upper_envelope_of_lines(branches, Q(0), Q(1), hid)
    return BetaHypothesis(hid, PiecewiseBound("alpha", tuple(pieces)),
                          f"Heath-Brown (2017) k-th derivative test, k={k}")


def _upper_envelope_of_lines(lines: Sequence[AffineForm], lo: Fraction,
                             hi: Fraction, provenance: str) -> list[Piece]:
    """Pointwise max of affine forms as sorted pieces (exact crossings)."""
    xs = {lo, hi}
    for i, f in enumerate(lines):
        for g in lines[i + 1:]:
            a = f.coeff("alpha") - g.coeff("alpha")
            if a != 0:
                x = (g.const - f.const) / a
                if lo < x < hi:
                    xs.add(x)
    pieces = []
    for x0, x1 in zip(sorted(xs), sorted(xs)[1:]):
        mid = (x0 + x1) / 2
        top = max(lines, key=lambda f: f.evaluate({"alpha": mid}))
        pieces.append(Piece(x0, x1, top, provenance))
    merged = []
    for p in pieces:
        if merged and merged[-1].form == p.form:
            merged[-1] = Piece(merged[-1].lo, p.hi, p.form, provenance)
        else:
            merged.append(p)
    return merged


# -- shipped literature rows --------------------------------------------------
# Each entry: (id, c0, c1, lo, hi, citation).  The alpha ranges are the stated
# ranges of the sources; they are data, not re-derived.

LITERATURE_ROWS = (
    ("beta-hux171-a", Q(89, 2706), Q(2243, 2706), Q(890, 3277), Q(199, 716),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-b", Q(1, 66), Q(235, 264), Q(120, 419), Q(754, 2579),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-c", Q(13, 146), Q(47, 73), Q(861996, 2811205), Q(87, 275),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-d", Q(11, 244), Q(191, 244), Q(87, 275), Q(423, 1295),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-e", Q(89, 1282), Q(454, 641), Q(423, 1295), Q(227, 601),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-f", Q(29, 280), Q(173, 280), Q(227, 601), Q(12, 31),
     "Huxley (1996), Table 17.1"),
    ("beta-hux171-g", Q(1, 32), Q(103, 128), Q(12, 31), Q(1508, 3825),
     "Huxley (1996), Table 17.1"),
    ("beta-hux192-a", Q(569, 2800), Q(1053, 2800), Q(62831, 155153), Q(143, 349),
     "Huxley (1996), Table 19.2"),
    ("beta-hux192-b", Q(491, 5530), Q(1812, 2765), Q(143, 349), Q(263, 638),
     "Huxley (1996), Table 19.2"),
    ("beta-hux192-c", Q(113, 1345), Q(897, 1345), Q(263, 638), Q(1673, 4038),
     "Huxley (1996), Table 19.2"),
    ("beta-bourgain318-a", Q(2, 9), Q(1, 3), Q(1673, 4038), Q(5, 12),
     "Bourgain (2017), (3.18)"),
    ("beta-bourgain318-b", Q(1, 12), Q(2, 3), Q(5, 12), Q(3, 7),
     "Bourgain (2017), (3.18)"),
)

# Seed exponent pairs (id, k, l, citation).
SEED_PAIRS = (
    ("pair-bourgain17", Q(13, 84), Q(55, 84), "Bourgain (2017)"),
    ("pair-watt89", Q(89, 560), Q(369, 560), "Watt (1989)"),
    ("pair-ty-a", Q(715, 10238), Q(7955, 10238), "Trudgian-Yang (2024), Lemma 1.1"),
    ("pair-ty-b", Q(4742, 38463), Q(35731, 51284), "Trudgian-Yang (2024), Lemma 1.1"),
)

# The published 18-row piecewise bound on [0, 1/2] (forms and stated ranges),
# used by the reproduction report.  Derived rows are tagged with how the
# engine obtains them.
PUBLISHED_TABLE = (
    (affine({"alpha": Q(3, 4)}, Q(1, 20)), Q(0), Q(1, 4), "beta-heath-brown-k5"),
    (affine({"alpha": Q(19, 20)}), Q(1, 4), Q(890, 3277), "beta-heath-brown-k5"),
    (affine({"alpha": Q(2243, 2706)}, Q(89, 2706)), Q(890, 3277), Q(199, 716), "beta-hux171-a"),
    (affine({"alpha": Q(235, 264)}, Q(1, 66)), Q(120, 419), Q(754, 2579), "beta-hux171-b"),
    (affine({"alpha": Q(1389, 1736)}, Q(9, 217)), Q(754, 2579), Q(251324, 841245), "pair:AD(pair-bourgain17)"),
    (affine({"alpha": Q(52209, 69128)}, Q(2371, 43205)), Q(251324, 841245), Q(861996, 2811205), "pair:A(pair-ty-b)"),
    (affine({"alpha": Q(47, 73)}, Q(13, 146)), Q(861996, 2811205), Q(87, 275), "beta-hux171-c"),
    (affine({"alpha": Q(191, 244)}, Q(11, 244)), Q(87, 275), Q(423, 1295), "beta-hux171-d"),
    (affine({"alpha": Q(454, 641)}, Q(89, 1282)), Q(423, 1295), Q(227, 601), "beta-hux171-e"),
    (affine({"alpha": Q(173, 280)}, Q(29, 280)), Q(227, 601), Q(12, 31), "beta-hux171-f"),
    (affine({"alpha": Q(103, 128)}, Q(1, 32)), Q(12, 31), Q(1508, 3825), "beta-hux171-g"),
    (affine({"alpha": Q(521, 796)}, Q(18, 199)), Q(1508, 3825), Q(62831, 155153), "pair:D(pair-bourgain17)"),
    (affine({"alpha": Q(1053, 2800)}, Q(569, 2800)), Q(62831, 155153), Q(143, 349), "beta-hux192-a"),
    (affine({"alpha": Q(1812, 2765)}, Q(491, 5530)), Q(143, 349), Q(263, 638), "beta-hux192-b"),
    (affine({"alpha": Q(897, 1345)}, Q(113, 1345)), Q(263, 638), Q(1673, 4038), "beta-hux192-c"),
    (affine({"alpha": Q(1, 3)}, Q(2, 9)), Q(1673, 4038), Q(5, 12), "beta-bourgain318-a"),
    (affine({"alpha": Q(2, 3)}, Q(1, 12)), Q(5, 12), Q(3, 7), "beta-bourgain318-b"),
    (affine({"alpha": Q(1, 2)}, Q(13, 84)), Q(3, 7), Q(1, 2), "pair-bourgain17"),
)

# The printed table leaves (199/716, 120/419) uncovered; the engine covers it
# with the best hypothesis and reports which one.
TABLE_GAP = (Q(199, 716), Q(120, 419))


def old_exponent_pair() -> ExponentPair:
    """(3/40, 31/40): convex combination of Watt-pair process images.

    The certificate is replayed, not trusted: the exact rational identity
    x y AW + (1-x) y ABAW + (1-y) W with x = 37081/40415, y = 476897/493711
    is checked on construction.
    """
    w = pair(Q(89, 560), Q(369, 560), "pair-watt89")
    aw = process_A(w)
    abaw = process_A(process_B(process_A(w)))
    x = Q(37081, 40415)
    y = Q(476897, 493711)
    target = ExponentPair(Q(3, 40), Q(31, 40),
                          "convex(A(pair-watt89), ABA(pair-watt89), pair-watt89)")
    if not verify_combination(target, [(x * y, aw), ((1 - x) * y, abaw), (1 - y, w)]):
        raise AssertionError("old exponent pair certificate failed to replay")
    return target


def seed_pairs() -> list[tuple[str, ExponentPair]]:
    return [(hid, pair(k, l, hid)) for hid, k, l, _cite in SEED_PAIRS]


def default_hypotheses(hb_orders: Sequence[int] = (5,)) -> list[BetaHypothesis]:
    """The curated hypothesis set whose envelope is the published table.

    The honest equilibrium over *all* known bounds undercuts the published
    first two rows below alpha = 890/3277 (higher A-iterates and larger
    Heath-Brown orders win there), so reproduction of the table as printed
    keeps exactly its inputs: Heath-Brown k=5 by default (hb_orders is
    configurable), the cited table rows, the seed pairs and their A/D
    derivatives.  Trivial bounds (beta <= alpha, the (0,1) pair) are
    deliberately not seeded for the same reason.
    """
    hyps: list[BetaHypothesis] = [
        BetaHypothesis("beta-endpoint-0", point_bound("alpha", 0, 0, "beta-endpoint-0"),
                       "van der Corput inequalities: beta(0) = 0"),
        BetaHypothesis("beta-endpoint-1", point_bound("alpha", 1, Q(1, 2), "beta-endpoint-1"),
                       "van der Corput inequalities: beta(1) = 1/2"),
    ]
    for k in hb_orders:
        hyps.append(heath_brown_beta(k))
    for hid, c0, c1, lo, hi, cite in LITERATURE_ROWS:
        hyps.append(BetaHypothesis(
            hid, single("alpha", lo, hi, affine({"alpha": c1}, c0), hid), cite))
    for hid, p in seed_pairs():
        hyps.append(BetaHypothesis(f"beta:dual({hid})", pair_to_beta(p, f"pair:{hid}"),
                                   f"dual line of exponent pair {p}"))
    # A-process images of the Trudgian-Yang seeds.
    tyb = pair(Q(4742, 38463), Q(35731, 51284), "pair-ty-b")
    a_tyb = process_A(tyb)
    hyps.append(BetaHypothesis("beta:dual(pair:A(pair-ty-b))",
                               pair_to_beta(a_tyb, "pair:A(pair-ty-b)"),
                               f"dual line of exponent pair {a_tyb}"))
    return hyps


# Seeds whose D-process derivatives enter the default envelope.  Only the
# (13/84, 55/84) derivatives appear in the published table; the D points of
# the other seeds are also certifiable pairs but would undercut the table
# rows near alpha = 0 and inside the printed gap, so folding them in is
# opt-in (hull_closure produces them for the honest equilibrium).
D_SEEDS = ("pair-bourgain17",)


def build_beta_envelope(hyps: Optional[Iterable[BetaHypothesis]] = None,
                        domain: tuple = (Q(0), Q(1, 2)),
                        include_conjectural: bool = False,
                        d_seeds: Sequence[str] = D_SEEDS) -> PiecewiseBound:
    """Envelope of the database on [0, 1/2]; range beyond 1/2 via reflection.

    Certified D-process pairs (and their A-images) are folded in: the
    D point is emitted as a pair only when its dual line dominates the
    envelope of everything else together with the D bound itself,
    mirroring how the published table was assembled.
    """
    if hyps is None:
        hyps = default_hypotheses()
    hyps = [h for h in hyps
            if include_conjectural or h.conditionality == UNCONDITIONAL]
    bounds = [h.bound for h in hyps]
    base_env = envelope(bounds, domain=(Q(0), Q(1)), require_cover=False)
    extra: list[PiecewiseBound] = []
    for hid, p in seed_pairs():
        if hid not in d_seeds:
            continue
        extra.append(process_D_bound(p, f"beta:D({hid})"))
        cand = certify_d_pair(p, base_env)
        if cand is not None:
            extra.append(pair_to_beta(cand, f"pair:D({hid})"))
            a_img = process_A(cand)
            extra.append(pair_to_beta(a_img, f"pair:AD({hid})"))
    return envelope(bounds + extra, domain=domain)


def full_envelope(env_half: PiecewiseBound) -> PiecewiseBound:
    """Extend an envelope on [0, 1/2] to [0, 1] by the reflection symmetry."""
    mirrored = reflect_beta(env_half)
    return envelope([env_half, mirrored], domain=(Q(0), Q(1)), require_cover=False)


def published_envelope() -> PiecewiseBound:
    """The published 18-row table as a bound on [0, 1/2], gap left uncovered.

    This is the envelope that certifies the four new exponent pairs: the
    dual polygon is cut at its breakpoints only, with the endpoint anchors
    supplying the values at 0 and 1/2-reflected-to-1.  The computed
    envelope (build_beta_envelope) is pointwise at least as strong; it
    differs on [0, 74/435] and inside the gap, where better hypotheses
    exist than the printed rows.
    """
    bounds = [point_bound("alpha", 0, 0, "beta-endpoint-0"),
              point_bound("alpha", 1, Q(1, 2), "beta-endpoint-1")]
    for form, lo, hi, src in PUBLISHED_TABLE:
        bounds.append(single("alpha", lo, hi, form, src))
    return envelope(bounds, domain=(Q(0), Q(1, 2)), require_cover=False)


# Heath-Brown orders used when deriving new pairs from the envelope.  The
# larger sweep only strengthens the envelope below alpha ~ 890/3277, which
# is exactly what pins the small-k vertices of the dual polygon.
PAIR_DERIVATION_HB_ORDERS = tuple(range(3, 13))


def derivation_envelope() -> PiecewiseBound:
    """Envelope over the full default database (Heath-Brown sweep included)."""
    return build_beta_envelope(default_hypotheses(hb_orders=PAIR_DERIVATION_HB_ORDERS))


def new_exponent_pairs(certificate: str = "dual(beta-envelope)") -> list[ExponentPair]:
    """Vertices of the dual polygon of the full-database envelope on [0, 1]."""
    from .expairs import beta_to_pairs
    return beta_to_pairs(full_envelope(derivation_envelope()), certificate)


@dataclass(frozen=True)
class TableReport:
    matched_rows: tuple[int, ...]
    missing_rows: tuple[int, ...]
    gap_provenance: str
    gap_value_mid: Fraction
    extra_breakpoints: tuple[Fraction, ...]
    discontinuities: tuple


def table_reproduction_report(env: PiecewiseBound) -> TableReport:
    """Compare a computed envelope against the published rows.

    A row matches when the envelope contains a piece with the row's exact
    affine form overlapping the row's stated range.  The report also names
    the hypothesis covering the printed gap (199/716, 120/419) and lists
    breakpoints the envelope has beyond the printed ones.
    """
    matched, missing = [], []
    for i, (form, lo, hi, _src) in enumerate(PUBLISHED_TABLE):
        ok = any(p.form == form and max(p.lo, lo) < min(p.hi, hi)
                 for p in env.pieces)
        (matched if ok else missing).append(i)
    gap_lo, gap_hi = TABLE_GAP
    mid = (gap_lo + gap_hi) / 2
    prov, val = "", None
    for p in env.pieces:
        if p.lo <= mid <= p.hi and p.lo < p.hi:
            v = p.value(mid)
            if val is None or v < val:
                prov, val = p.provenance, v
    printed = {lo for _f, lo, _hi, _s in PUBLISHED_TABLE} | \
              {hi for _f, _lo, hi, _s in PUBLISHED_TABLE}
    extra = tuple(x for x in env.breakpoints() if x not in printed)
    return TableReport(tuple(matched), tuple(missing), prov, val,
                       extra, tuple(env.discontinuities()))
