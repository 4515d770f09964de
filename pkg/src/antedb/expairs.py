"""Exponent pairs, the van der Corput / Sargos processes, and beta duality.

A pair (k, l) lives in the triangle 0 <= k <= 1/2 <= l <= 1, k + l <= 1 and
certifies the dual line bound beta(alpha) <= k + (l - k) alpha on [0, 1].
Conversely, a piecewise bound on beta yields the polygon of all pairs whose
dual line dominates it; new pairs are read off as polygon vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import AffineForm, affine, const, ge, le, polytope, var
from .num import NEG_INF, Q, qstr
from .piecewise import PiecewiseBound, Piece, dominates, envelope, reflect_beta, single


class InvalidPair(ValueError):
    """Candidate point violates the exponent-pair triangle constraints."""


@dataclass(frozen=True)
class ExponentPair:
    k: Fraction
    l: Fraction
    certificate: str = "cite"

    def __post_init__(self):
        k, l = self.k, self.l
        if not (0 <= k <= Q(1, 2) <= l <= 1 and k + l <= 1):
            raise InvalidPair(f"({qstr(k)}, {qstr(l)}) outside the exponent-pair triangle")

    def key(self) -> tuple[Fraction, Fraction]:
        return (self.k, self.l)

    def __str__(self) -> str:
        return f"({qstr(self.k)}, {qstr(self.l)})"


def pair(k, l, certificate: str = "cite") -> ExponentPair:
    return ExponentPair(Q(k), Q(l), certificate)


# -- processes --------------------------------------------------------------

def process_A(p: ExponentPair) -> ExponentPair:
    d = 2 * p.k + 2
    return ExponentPair(p.k / d, p.l / d + Q(1, 2), f"A({p.certificate})")


def process_B(p: ExponentPair) -> ExponentPair:
    # Involution; the image always satisfies the triangle constraints, but we
    # validate anyway (ExponentPair's constructor rejects bad points).
    return ExponentPair(p.l - Q(1, 2), p.k + Q(1, 2), f"B({p.certificate})")


def process_C(p: ExponentPair) -> ExponentPair:
    d = 12 * (1 + 4 * p.k)
    return ExponentPair(p.k / d, (11 * (1 + 4 * p.k) + p.l) / d, f"C({p.certificate})")


def d_point(p: ExponentPair) -> tuple[Fraction, Fraction]:
    """The candidate point (k1, l1) produced by the Sargos D-process."""
    den = 8 * (5 * p.k + 3 * p.l + 2)
    k1 = (5 * p.k + p.l + 2) / den
    l1 = (29 * p.k + 21 * p.l + 10) / den
    return k1, l1


def process_D_bound(p: ExponentPair, provenance: str) -> PiecewiseBound:
    """Two-branch beta bound from the D-process: max(line(k1,l1), 1/12 + 2a/3)."""
    k1, l1 = d_point(p)
    line = affine({"alpha": l1 - k1}, k1)
    branch = affine({"alpha": Q(2, 3)}, Q(1, 12))
    # Pointwise max of the two lines on [0, 1], split at an interior crossing.
    a = line.coeff("alpha") - branch.coeff("alpha")
    xs = [Q(0), Q(1)]
    if a != 0:
        x = (branch.const - line.const) / a
        if 0 < x < 1:
            xs = [Q(0), x, Q(1)]
    pieces = []
    for x0, x1 in zip(xs, xs[1:]):
        mid = (x0 + x1) / 2
        top = max((line, branch), key=lambda f: f.evaluate({"alpha": mid}))
        if pieces and pieces[-1].form == top:
            pieces[-1] = Piece(pieces[-1].lo, x1, top, provenance)
        else:
            pieces.append(Piece(x0, x1, top, provenance))
    return PiecewiseBound("alpha", tuple(pieces))


def certify_d_pair(p: ExponentPair, beta_env: PiecewiseBound) -> Optional[ExponentPair]:
    """Emit D(p) as a pair when its dual line dominates the known envelope.

    The D-process alone only gives a beta bound; the point (k1, l1) is a
    pair exactly when beta <= its dual line on all of [0, 1], which we check
    against the best known envelope (including the D bound itself).
    """
    k1, l1 = d_point(p)
    line = affine({"alpha": l1 - k1}, k1)
    dbound = process_D_bound(p, "d-process")
    env = envelope([beta_env, dbound], domain=(Q(0), Q(1)), require_cover=False)
    if dominates(env, line):
        return ExponentPair(k1, l1, f"D({p.certificate})")
    return None


# -- duality ----------------------------------------------------------------

def pair_to_beta(p: ExponentPair, provenance: str = "") -> PiecewiseBound:
    """Dual line bound beta(alpha) <= k + (l - k) alpha on [0, 1]."""
    line = affine({"alpha": p.l - p.k}, p.k)
    return single("alpha", 0, 1, line, provenance or f"pair{p}")


def beta_to_pairs(env: PiecewiseBound, certificate: str = "dual") -> list[ExponentPair]:
    """Vertices of the polygon of pairs whose dual line dominates env.

    env must cover [0, 1] (build the upper half by reflection first).  The
    polygon is cut out inside the exponent-pair triangle by one constraint
    per breakpoint: k (1 - a) + l a >= env(a).  Dominance over a
    piecewise-affine bound need only be enforced at breakpoints.
    """
    dom = env.domain
    if dom is None or dom[0] > 0 or dom[1] < 1:
        raise ValueError("envelope must cover [0, 1]; reflect the lower half first")
    cons = [ge(var("k")), le(var("k"), Q(1, 2)),
            ge(var("l"), Q(1, 2)), le(var("l"), Q(1)),
            le(var("k") + var("l"), Q(1))]
    for x in env.breakpoints():
        v = env.value_at(x)
        if v is None or v == NEG_INF:
            continue
        cons.append(ge(affine({"k": 1 - x, "l": x}), Q(v)))
    poly = polytope(["k", "l"], cons)
    verts = _polygon_vertices(poly)
    return [ExponentPair(k, l, certificate) for k, l in verts]


def _polygon_vertices(poly) -> list[tuple[Fraction, Fraction]]:
    """Exact vertex enumeration for a 2-D polytope from pairwise boundaries."""
    cons = poly.constraints
    pts = set()
    for i in range(len(cons)):
        for j in range(i + 1, len(cons)):
            f, g = cons[i].form, cons[j].form
            a1, b1, c1 = f.coeff("k"), f.coeff("l"), f.const
            a2, b2, c2 = g.coeff("k"), g.coeff("l"), g.const
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            k = (-c1 * b2 + c2 * b1) / det
            l = (-a1 * c2 + a2 * c1) / det
            if poly.contains({"k": k, "l": l}):
                pts.add((k, l))
    return sorted(pts)


# -- convex structure ---------------------------------------------------------

def verify_combination(target: ExponentPair,
                       terms: Sequence[tuple[Fraction, ExponentPair]]) -> bool:
    """Exact check that target is the stated convex combination of pairs."""
    weights = [Q(w) for w, _ in terms]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must be nonnegative and sum to 1")
    k = sum(w * p.k for w, (_, p) in zip(weights, terms))
    l = sum(w * p.l for w, (_, p) in zip(weights, terms))
    return (k, l) == (target.k, target.l)


def in_convex_hull(point: tuple[Fraction, Fraction],
                   pts: Sequence[tuple[Fraction, Fraction]]) -> bool:
    """Exact LP feasibility: is point a convex combination of pts?"""
    if not pts:
        return False
    from . import lp
    n = len(pts)
    # variables: lambda_1..lambda_n (free, constrained >= 0)
    rows = []
    for i in range(n):
        coeffs = [Q(0)] * n
        coeffs[i] = Q(1)
        rows.append((coeffs, Q(0), False))           # lambda_i >= 0
    rows.append(([Q(1)] * n, Q(-1), True))           # sum = 1
    rows.append(([p[0] for p in pts], -Q(point[0]), True))
    rows.append(([p[1] for p in pts], -Q(point[1]), True))
    status, _, _ = lp.solve_lp(n, [Q(0)] * n, rows)
    return status == lp.OPTIMAL


def hull_closure(base: Iterable[ExponentPair],
                 processes: Iterable[str] = ("A", "B", "C", "D"),
                 depth: int = 4,
                 beta_env: Optional[PiecewiseBound] = None,
                 max_pairs: int = 400) -> list[ExponentPair]:
    """Closure of a pair set under the processes, with convex-hull pruning.

    D only emits a pair when its dual line passes the envelope-dominance
    check, so it is skipped unless beta_env is given.  A pair is dropped
    when it lies in the convex hull of the others; every retained pair
    carries its derivation word as certificate.  Deterministic: candidates
    are processed in sorted order and the result is sorted by (k, l).
    """
    procs = set(processes)
    known: dict[tuple[Fraction, Fraction], ExponentPair] = {}
    for p in sorted(base, key=lambda p: p.key()):
        known.setdefault(p.key(), p)
    frontier = sorted(known.values(), key=lambda p: p.key())
    for _ in range(max(depth, 0)):
        new: list[ExponentPair] = []
        for p in frontier:
            candidates = []
            if "A" in procs:
                candidates.append(process_A(p))
            if "B" in procs:
                try:
                    candidates.append(process_B(p))
                except InvalidPair:
                    pass
            if "C" in procs:
                candidates.append(process_C(p))
            if "D" in procs and beta_env is not None:
                cand = certify_d_pair(p, beta_env)
                if cand is not None:
                    candidates.append(cand)
            for c in candidates:
                if c.key() not in known:
                    known[c.key()] = c
                    new.append(c)
        if not new:
            break
        frontier = sorted(new, key=lambda p: p.key())
        if len(known) > max_pairs:
            break
    # Dominance pruning: drop pairs inside the convex hull of the others.
    # One pass is enough: hull vertices of the full set are never in the
    # hull of the rest, and everything else is in the hull of the vertices.
    keys = sorted(known)
    kept = [known[key] for key in keys
            if not in_convex_hull(key, [k2 for k2 in keys if k2 != key])]
    return sorted(kept, key=lambda p: p.key())
