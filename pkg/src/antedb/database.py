"""Hypothesis store: records with citations, dependencies and proof traces.

Every statement the engine uses is a record: literature facts carry their
data and citation; derived facts carry the rule and dependency ids that
replay to a bit-identical payload.  The store is an acyclic graph;
conditional flags (conjectural inputs) taint everything derived from them.

Persistence is line-oriented UTF-8 text, one ``key=value`` field per line,
records separated by blank lines, canonically ordered by id, rationals as
p/q; chosen over binary for diffability and hand editing.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import beta as beta_mod
from . import energy as energy_mod
from . import expairs as ep
from . import large_values as lv_mod
from . import mu as mu_mod
from . import zero_density as zd_mod
from .num import NEG_INF, POS_INF, Q, qparse, qstr

KINDS = ("exponent-pair", "beta-bound", "mu-bound", "lv-bound", "lvz-bound",
         "density-bound", "energy-constraint", "rule-application")


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DatabaseError(ValueError):
    pass


@dataclass(frozen=True)
class Hypothesis:
    hid: str
    kind: str
    fields: tuple[tuple[str, str], ...]   # payload, sorted by key
    citation: str = ""
    deps: tuple[str, ...] = ()
    conditional: bool = False

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.fields:
            if k == key:
                return v
        return default

    @property
    def rule(self) -> Optional[str]:
        return self.get("rule")


def record(hid: str, kind: str, citation: str = "", deps: Sequence[str] = (),
           conditional: bool = False, **payload) -> Hypothesis:
    if kind not in KINDS:
        raise DatabaseError(f"unknown kind {kind!r}")
    fields = tuple(sorted((k, str(v)) for k, v in payload.items()))
    return Hypothesis(hid, kind, fields, citation, tuple(deps), conditional)


@dataclass(frozen=True)
class TraceStep:
    rule: str
    inputs: tuple[str, ...]
    output: str
    citation: str


@dataclass(frozen=True)
class ProofTrace:
    target: str
    steps: tuple[TraceStep, ...]
    conditional: bool

    def render(self) -> str:
        lines = [f"proof trace for {self.target}"
                 + (" (conditional)" if self.conditional else "")]
        for i, s in enumerate(self.steps, 1):
            src = f" from [{', '.join(s.inputs)}]" if s.inputs else ""
            cite = f"  -- {s.citation}" if s.citation else ""
            lines.append(f"  {i}. {s.output} via {s.rule}{src}{cite}")
        return "\n".join(lines)


class Database:
    def __init__(self):
        self._records: dict[str, Hypothesis] = {}

    # -- store ------------------------------------------------------------

    def add(self, h: Hypothesis) -> None:
        if h.hid in self._records:
            if self._records[h.hid] != h:
                raise DatabaseError(f"conflicting records for id {h.hid!r}")
            return
        for d in h.deps:
            if d not in self._records:
                raise DatabaseError(f"{h.hid}: dangling dependency {d!r}")
            # Dependencies must already exist, so cycles cannot form.
        self._records[h.hid] = h

    def __contains__(self, hid: str) -> bool:
        return hid in self._records

    def __getitem__(self, hid: str) -> Hypothesis:
        return self._records[hid]

    def __len__(self) -> int:
        return len(self._records)

    def records(self, kind: Optional[str] = None) -> list[Hypothesis]:
        out = [h for h in self._records.values() if kind is None or h.kind == kind]
        return sorted(out, key=lambda h: h.hid)

    def is_conditional(self, hid: str) -> bool:
        h = self._records[hid]
        return h.conditional or any(self.is_conditional(d) for d in h.deps)

    def trace(self, hid: str) -> ProofTrace:
        steps: list[TraceStep] = []
        seen: set[str] = set()

        def visit(i: str):
            if i in seen:
                return
            seen.add(i)
            h = self._records[i]
            for d in h.deps:
                visit(d)
            steps.append(TraceStep(h.rule or "citation", h.deps, i, h.citation))

        visit(hid)
        return ProofTrace(hid, tuple(steps), self.is_conditional(hid))

    # -- persistence --------------------------------------------------------

    _HEAD_FIELDS = ("id", "kind", "conditional", "citation", "deps")

    def save_text(self) -> str:
        blocks = []
        for h in self.records():
            lines = [f"id={h.hid}", f"kind={h.kind}",
                     f"conditional={'true' if h.conditional else 'false'}",
                     f"citation={h.citation}",
                     f"deps={','.join(h.deps)}"]
            for k, v in h.fields:
                lines.append(f"{k}={v}")
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.save_text())

    @classmethod
    def load_text(cls, text: str) -> "Database":
        db = cls()
        pending: list[tuple[dict, int]] = []
        cur: dict[str, str] = {}
        start_line = 1
        for ln, raw in enumerate(text.split("\n"), 1):
            line = raw.rstrip()
            if not line:
                if cur:
                    pending.append((cur, start_line))
                    cur = {}
                start_line = ln + 1
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value, got {line!r}", ln)
            key, value = line.split("=", 1)
            key = key.strip()
            if not key:
                raise ParseError("empty key", ln)
            if key in cur:
                raise ParseError(f"duplicate key {key!r}", ln)
            cur[key] = value
        if cur:
            pending.append((cur, start_line))
        staged: dict[str, Hypothesis] = {}
        for fieldsmap, ln in pending:
            missing = [k for k in ("id", "kind") if k not in fieldsmap]
            if missing:
                raise ParseError(f"record missing {missing}", ln)
            hid = fieldsmap.pop("id")
            kind = fieldsmap.pop("kind")
            if kind not in KINDS:
                raise ParseError(f"unknown kind {kind!r}", ln)
            cond_text = fieldsmap.pop("conditional", "false")
            if cond_text not in ("true", "false"):
                raise ParseError(f"conditional must be true/false, got {cond_text!r}", ln)
            citation = fieldsmap.pop("citation", "")
            deps_text = fieldsmap.pop("deps", "")
            deps = tuple(d for d in deps_text.split(",") if d)
            _validate_payload(kind, fieldsmap, ln)
            h = Hypothesis(hid, kind, tuple(sorted(fieldsmap.items())), citation,
                           deps, cond_text == "true")
            if hid in staged:
                raise ParseError(f"duplicate id {hid!r}", ln)
            staged[hid] = h
        # Insert respecting dependencies (acyclicity enforced by add()).
        remaining = dict(staged)
        progress = True
        while remaining and progress:
            progress = False
            for hid in sorted(remaining):
                h = remaining[hid]
                if all(d in db for d in h.deps):
                    db.add(h)
                    del remaining[hid]
                    progress = True
        if remaining:
            bad = sorted(remaining)
            raise DatabaseError(
                f"dangling or cyclic dependencies among: {', '.join(bad)}")
        return db

    @classmethod
    def load(cls, path) -> "Database":
        with open(path, encoding="utf-8") as f:
            return cls.load_text(f.read())

    # -- integrity ---------------------------------------------------------

    def check(self) -> list[str]:
        """Replay every rule application; complain about any mismatch."""
        problems = []
        for h in self.records():
            if h.rule is None:
                continue
            try:
                ok = replay(self, h)
            except Exception as exc:
                problems.append(f"{h.hid}: replay raised {exc!r}")
                continue
            if not ok:
                problems.append(f"{h.hid}: replay does not reproduce the payload")
        return problems


def _validate_payload(kind: str, fields: dict[str, str], ln: int) -> None:
    def need_rational(key):
        if key in fields:
            try:
                qparse(fields[key])
            except ValueError as exc:
                raise ParseError(f"field {key}: {exc}", ln)

    if kind == "exponent-pair":
        for key in ("k", "l"):
            if key not in fields:
                raise ParseError(f"exponent-pair needs field {key!r}", ln)
            need_rational(key)
        k, l = qparse(fields["k"]), qparse(fields["l"])
        if not (0 <= k <= Q(1, 2) <= l <= 1 and k + l <= 1):
            raise ParseError("pair outside the exponent-pair triangle", ln)
    elif kind == "mu-bound":
        for key in ("sigma", "value"):
            if key not in fields:
                raise ParseError(f"mu-bound needs field {key!r}", ln)
            need_rational(key)
    elif kind == "density-bound":
        if "rule" not in fields:
            for key in ("num", "den_a", "den_b", "lo", "hi"):
                if key not in fields:
                    raise ParseError(f"density-bound needs field {key!r}", ln)
                need_rational(key)
    elif kind == "beta-bound":
        if "rule" not in fields and "pieces" not in fields:
            raise ParseError("beta-bound needs pieces or a rule", ln)
        if "pieces" in fields:
            _parse_beta_pieces(fields["pieces"], ln)
    elif kind in ("lv-bound", "lvz-bound", "energy-constraint"):
        if "constructor" not in fields and "rule" not in fields \
                and "branches" not in fields:
            raise ParseError(f"{kind} needs a constructor, rule or branches", ln)


def _parse_beta_pieces(text: str, ln: int = 0):
    """pieces field: `lo:hi:c0:c1` entries separated by `;`."""
    pieces = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        if len(bits) != 4:
            raise ParseError(f"bad beta piece {part!r}", ln)
        lo, hi, c0, c1 = (qparse(b) for b in bits)
        pieces.append((lo, hi, c0, c1))
    if not pieces:
        raise ParseError("empty pieces field", ln)
    return pieces


def beta_pieces_field(bound) -> str:
    parts = []
    for p in bound.pieces:
        parts.append(f"{qstr(p.lo)}:{qstr(p.hi)}:{qstr(p.form.const)}:"
                     f"{qstr(p.form.coeff(bound.variable))}")
    return ";".join(parts)


# -- replayable rules -----------------------------------------------------------

def _pair_of(db: Database, hid: str) -> ep.ExponentPair:
    h = db[hid]
    return ep.ExponentPair(qparse(h.get("k")), qparse(h.get("l")), hid)


def replay(db: Database, h: Hypothesis) -> bool:
    """Recompute a derived record from its dependencies; True iff identical."""
    rule = h.rule
    if rule == "process":
        word = h.get("word", "")
        p = _pair_of(db, h.deps[0])
        for step in reversed(word):
            if step == "A":
                p = ep.process_A(p)
            elif step == "B":
                p = ep.process_B(p)
            elif step == "C":
                p = ep.process_C(p)
            elif step == "D":
                p = ep.ExponentPair(*ep.d_point(p))
            else:
                raise DatabaseError(f"{h.hid}: bad process letter {step!r}")
        return (qstr(p.k), qstr(p.l)) == (h.get("k"), h.get("l"))
    if rule == "convex-combination":
        weights = [qparse(w) for w in h.get("weights").split(",")]
        pairs = [_pair_of(db, d) for d in h.deps]
        target = ep.ExponentPair(qparse(h.get("k")), qparse(h.get("l")))
        return ep.verify_combination(target, list(zip(weights, pairs)))
    if rule == "dual-polygon-vertex":
        verts = {p.key() for p in beta_mod.new_exponent_pairs()}
        return (qparse(h.get("k")), qparse(h.get("l"))) in verts
    if rule == "pair-to-beta":
        p = _pair_of(db, h.deps[0])
        return beta_pieces_field(ep.pair_to_beta(p)) == h.get("pieces")
    if rule == "d-process-bound":
        p = _pair_of(db, h.deps[0])
        return beta_pieces_field(ep.process_D_bound(p, h.hid)) == h.get("pieces")
    if rule == "heath-brown-beta":
        k = int(h.get("k"))
        return beta_pieces_field(beta_mod.heath_brown_beta(k).bound) == h.get("pieces")
    if rule == "mu-from-pair":
        p = _pair_of(db, h.deps[0])
        m = mu_mod.mu_from_pair(p)
        return (qstr(m.sigma), qstr(m.value)) == (h.get("sigma"), h.get("value"))
    if rule == "density-pipeline":
        pipeline = h.get("pipeline")
        lo, hi = qparse(h.get("lo")), qparse(h.get("hi"))
        sig = (lo + hi) / 2
        frac = zd_mod.LinFrac(qparse(h.get("num")), qparse(h.get("den_a")),
                              qparse(h.get("den_b")))
        got = derive_density(db, pipeline, sig)
        return got is not None and got == frac.value(sig)
    if rule == "energy-table-i":
        sig = qparse(h.get("checked_at"))
        d = energy_mod.derive_addest_part_i(sig)
        return d.bound_times_one_minus_sigma == energy_mod.addest_part_i_value(sig)
    if rule is None:
        return True
    raise DatabaseError(f"{h.hid}: unknown rule {rule!r}")


# -- derivation pipelines (shared by table assembly, queries and replay) --------

def derive_density(db: Database, pipeline: str, sigma: Fraction):
    """Run a named zero-density pipeline at a point; None when inapplicable."""
    sigma = Q(sigma)
    if pipeline == "ingham":
        d = zd_mod.a_from_lv_cor3(sigma, 2 - sigma, [lv_mod.l2_mvt()])
        return d.bound if d else None
    if pipeline == "huxley":
        d = zd_mod.a_from_lv_cor3(sigma, 3 * sigma - 1, [lv_mod.huxley()],
                                  [lv_mod.lvz_from_mu(Q(1, 2), Q(1, 6))])
        return d.bound if d else None
    if pipeline == "guth_maynard":
        d = zd_mod.a_from_lv_cor2(sigma, (3 + 5 * sigma) / 5,
                                  [lv_mod.guth_maynard(), lv_mod.l2_mvt()])
        return d.bound if d else None
    if pipeline == "hb_improved":
        if sigma <= Q(8, 11):
            return None
        d = zd_mod.a_from_lv_cor3(sigma, 10 * sigma - 7, [lv_mod.heath_brown()],
                                  [lv_mod.lvz_from_mu(Q(7, 10), Q(3, 40))])
        return d.bound if d else None
    if pipeline == "bourgain_improved":
        if not (Q(17, 22) <= sigma <= Q(4, 5)):
            return None
        tau0 = min(9 * (3 * sigma - 2) / 2, 8 * (2 * sigma - 1) / 3)
        lv = [lv_mod.jutila(3), lv_mod.jutila(4)] + lv_mod.bourgain_presets()
        d = zd_mod.a_from_lv_cor(sigma, tau0, lv, [lv_mod.twelfth_moment()])
        if d.bound in (POS_INF, NEG_INF):
            return None
        target = 3 / tau0
        return d.bound if d.bound <= target else None
    if pipeline == "bourgain_opt":
        if sigma <= Q(3, 4):
            return None
        pairs = [_pair_of(db, h.hid) for h in db.records("exponent-pair")]
        _, val = zd_mod.optimize_bourgain_zd(sigma, pairs)
        return val
    raise DatabaseError(f"unknown density pipeline {pipeline!r}")


# -- the default shipped database -----------------------------------------------

def default_database() -> Database:
    db = Database()
    # Seed exponent pairs (literature).
    for hid, k, l, cite in beta_mod.SEED_PAIRS:
        db.add(record(hid, "exponent-pair", cite, k=qstr(k), l=qstr(l)))
    # Process-derived pairs used by the published beta table.
    b17 = ep.pair(Q(13, 84), Q(55, 84))
    dp = ep.ExponentPair(*ep.d_point(b17))
    adp = ep.process_A(dp)
    db.add(record("pair:D(pair-bourgain17)", "exponent-pair",
                  "Sargos D-process image, certified against the envelope",
                  deps=["pair-bourgain17"], rule="process", word="D",
                  k=qstr(dp.k), l=qstr(dp.l)))
    db.add(record("pair:AD(pair-bourgain17)", "exponent-pair",
                  "A-process image of the certified D point",
                  deps=["pair-bourgain17"], rule="process", word="AD",
                  k=qstr(adp.k), l=qstr(adp.l)))
    tyb = ep.pair(Q(4742, 38463), Q(35731, 51284))
    atyb = ep.process_A(tyb)
    db.add(record("pair:A(pair-ty-b)", "exponent-pair", "A-process image",
                  deps=["pair-ty-b"], rule="process", word="A",
                  k=qstr(atyb.k), l=qstr(atyb.l)))
    # The old pair via its convex-combination certificate.
    w = ep.pair(Q(89, 560), Q(369, 560))
    aw = ep.process_A(w)
    abaw = ep.process_A(ep.process_B(ep.process_A(w)))
    db.add(record("pair:A(pair-watt89)", "exponent-pair", "A-process image",
                  deps=["pair-watt89"], rule="process", word="A",
                  k=qstr(aw.k), l=qstr(aw.l)))
    db.add(record("pair:ABA(pair-watt89)", "exponent-pair", "A,B,A process images",
                  deps=["pair-watt89"], rule="process", word="ABA",
                  k=qstr(abaw.k), l=qstr(abaw.l)))
    x, y = Q(37081, 40415), Q(476897, 493711)
    db.add(record("pair-old-3-40", "exponent-pair",
                  "convex combination of Watt-pair process images",
                  deps=["pair:A(pair-watt89)", "pair:ABA(pair-watt89)", "pair-watt89"],
                  rule="convex-combination",
                  weights=f"{qstr(x * y)},{qstr((1 - x) * y)},{qstr(1 - y)}",
                  k="3/40", l="31/40"))
    # Pairs used by the optimized Bourgain zero-density bound.
    for hid, k, l, cite in (
            ("pair-b-11-85", Q(11, 85), Q(59, 85), "classical exponent pair"),
            ("pair-b-391", Q(391, 4595), Q(3461, 4595), "Huxley-era exponent pair"),
            ("pair-b-2779", Q(2779, 38033), Q(58699, 76066), "Huxley-era exponent pair")):
        db.add(record(hid, "exponent-pair", cite, k=qstr(k), l=qstr(l)))
    # The four new dual-polygon pairs.
    for i, (k, l) in enumerate((
            (Q(89, 1282), Q(997, 1282)),
            (Q(652397, 9713986), Q(7599781, 9713986)),
            (Q(10769, 351096), Q(609317, 702192)),
            (Q(89, 3478), Q(15327, 17390))), 1):
        db.add(record(f"pair-new-{i}", "exponent-pair",
                      "vertex of the dual polygon of the beta envelope",
                      deps=[], rule="dual-polygon-vertex", k=qstr(k), l=qstr(l)))
    # Beta hypotheses.
    db.add(record("beta-endpoint-0", "beta-bound",
                  "van der Corput inequalities", pieces="0:0:0:0"))
    db.add(record("beta-endpoint-1", "beta-bound",
                  "van der Corput inequalities", pieces="1:1:1/2:0"))
    hb5 = beta_mod.heath_brown_beta(5)
    db.add(record("beta-heath-brown-k5", "beta-bound", hb5.citation,
                  rule="heath-brown-beta", k="5",
                  pieces=beta_pieces_field(hb5.bound)))
    for hid, c0, c1, lo, hi, cite in beta_mod.LITERATURE_ROWS:
        db.add(record(hid, "beta-bound", cite,
                      pieces=f"{qstr(lo)}:{qstr(hi)}:{qstr(c0)}:{qstr(c1)}"))
    for pair_hid in ("pair-bourgain17", "pair-watt89", "pair-ty-a", "pair-ty-b",
                     "pair:A(pair-ty-b)", "pair:D(pair-bourgain17)",
                     "pair:AD(pair-bourgain17)"):
        p = _pair_of(db, pair_hid)
        db.add(record(f"beta:dual({pair_hid})", "beta-bound",
                      f"dual line of exponent pair {p}",
                      deps=[pair_hid], rule="pair-to-beta",
                      pieces=beta_pieces_field(ep.pair_to_beta(p))))
    db.add(record("beta:D(pair-bourgain17)", "beta-bound",
                  "Sargos D-process bound", deps=["pair-bourgain17"],
                  rule="d-process-bound",
                  pieces=beta_pieces_field(ep.process_D_bound(b17, ""))))
    db.add(record("beta-conjecture", "beta-bound",
                  "exponent pair conjecture", conditional=True,
                  pieces="0:1:0:1/2"))
    # Mu records.
    db.add(record("mu-anchor-0", "mu-bound", "convexity anchor", sigma="0", value="1/2"))
    db.add(record("mu-anchor-1", "mu-bound", "convexity anchor", sigma="1", value="0"))
    ab01 = ep.process_A(ep.process_B(ep.pair(Q(0), Q(1))))
    db.add(record("pair-ab01", "exponent-pair", "van der Corput pair AB(0,1)",
                  k=qstr(ab01.k), l=qstr(ab01.l)))
    for pair_hid in ("pair-ab01", "pair-bourgain17", "pair-old-3-40",
                     "pair:AD(pair-bourgain17)"):
        p = _pair_of(db, pair_hid)
        m = mu_mod.mu_from_pair(p)
        db.add(record(f"mu:pair({pair_hid})", "mu-bound",
                      f"from exponent pair {p}", deps=[pair_hid],
                      rule="mu-from-pair", sigma=qstr(m.sigma), value=qstr(m.value)))
    db.add(record("mu-lindelof", "mu-bound", "Lindelof hypothesis",
                  conditional=True, sigma="1/2", value="0"))
    # Large-value hypotheses (constructor records).
    for hid, ctor, params in (
            ("lv-l2-mvt", "l2_mvt", {}),
            ("lv-huxley", "huxley", {}),
            ("lv-heath-brown", "heath_brown", {}),
            ("lv-jutila-k3", "jutila", {"k": "3"}),
            ("lv-jutila-k4", "jutila", {"k": "4"}),
            ("lv-guth-maynard", "guth_maynard", {}),
            ("lv-trivial", "trivial", {})):
        db.add(record(hid, "lv-bound", "", constructor=ctor, **params))
    db.add(record("lv-montgomery", "lv-bound", "Montgomery conjecture",
                  conditional=True, constructor="montgomery_conjecture"))
    db.add(record("lv-bourgain-ii:a", "lv-bound",
                  "Bourgain (2000), part (ii), optimized parameters",
                  constructor="bourgain_preset_a"))
    db.add(record("lv-bourgain-ii:b", "lv-bound",
                  "Bourgain (2000), part (ii), optimized parameters",
                  constructor="bourgain_preset_b"))
    db.add(record("lvz-twelfth-moment", "lvz-bound",
                  "Heath-Brown (1978) twelfth moment", constructor="twelfth_moment"))
    db.add(record("lvz:mu(pair-ab01)", "lvz-bound",
                  "impossible zone from mu(1/2) <= 1/6",
                  deps=["mu:pair(pair-ab01)"], constructor="lvz_from_mu"))
    db.add(record("lvz:mu(pair-old-3-40)", "lvz-bound",
                  "impossible zone from mu(7/10) <= 3/40",
                  deps=["mu:pair(pair-old-3-40)"], constructor="lvz_from_mu"))
    # Zero-density records: literature rows as data, bold rows as pipelines.
    for rec in zd_mod.density_table_records():
        payload = dict(num=qstr(rec.frac.num), den_a=qstr(rec.frac.a),
                       den_b=qstr(rec.frac.b), lo=qstr(rec.lo), hi=qstr(rec.hi))
        deps: list[str] = []
        if rec.derived_by:
            payload["rule"] = "density-pipeline"
            payload["pipeline"] = rec.derived_by
            if rec.derived_by == "bourgain_opt":
                deps = [h.hid for h in db.records("exponent-pair")]
        db.add(record(rec.hid, "density-bound", rec.citation, deps=deps,
                      conditional=rec.conditional, **payload))
    db.add(record("zd-density-hypothesis", "density-bound", "density hypothesis",
                  conditional=True, num="2", den_a="0", den_b="1",
                  lo="1/2", hi="1"))
    # Energy records.
    db.add(record("energy-hb-relation", "energy-constraint",
                  "Heath-Brown (1979) energy relation", constructor="hb_relation"))
    for rec in energy_mod.ENERGY_TABLE:
        branches = ";".join(
            f"{qstr(n0)}:{qstr(n1)}:{qstr(d0)}:{qstr(d1)}" for n0, n1, d0, d1 in rec.branches)
        payload = dict(branches=branches, lo=qstr(rec.lo), hi=qstr(rec.hi))
        if rec.hid == "astar-i":
            payload["rule"] = "energy-table-i"
            payload["checked_at"] = "39/50"
        db.add(record(rec.hid, "energy-constraint", rec.citation, **payload))
    return db


# -- queries -------------------------------------------------------------------

def beta_hypotheses(db: Database, include_conditional: bool = False):
    out = []
    for h in db.records("beta-bound"):
        if h.conditional and not include_conditional:
            continue
        pieces_text = h.get("pieces")
        if pieces_text is None:
            continue
        from .geometry import affine
        from .piecewise import Piece, PiecewiseBound
        pieces = tuple(Piece(lo, hi, affine({"alpha": c1}, c0), h.hid)
                       for lo, hi, c0, c1 in _parse_beta_pieces(pieces_text))
        out.append(beta_mod.BetaHypothesis(
            h.hid, PiecewiseBound("alpha", pieces), h.citation,
            beta_mod.CONJECTURAL if h.conditional else beta_mod.UNCONDITIONAL))
    return out


def mu_hypotheses(db: Database, include_conditional: bool = False):
    out = []
    for h in db.records("mu-bound"):
        if h.conditional and not include_conditional:
            continue
        out.append(mu_mod.MuHypothesis(h.hid, qparse(h.get("sigma")),
                                       qparse(h.get("value")), h.citation,
                                       h.conditional))
    return out


def lv_hypothesis(db: Database, h: Hypothesis):
    ctor = h.get("constructor")
    if ctor == "jutila":
        return lv_mod.jutila(int(h.get("k")))
    if ctor == "bourgain_preset_a":
        return lv_mod.bourgain_presets()[0]
    if ctor == "bourgain_preset_b":
        return lv_mod.bourgain_presets()[1]
    if ctor == "twelfth_moment":
        return lv_mod.twelfth_moment()
    if ctor == "lvz_from_mu":
        dep = db[h.deps[0]]
        return lv_mod.lvz_from_mu(qparse(dep.get("sigma")), qparse(dep.get("value")),
                                  h.hid, h.citation, db.is_conditional(h.hid))
    return lv_mod.lv_constructor(ctor)


def query_beta(db: Database, alpha: Fraction, include_conditional: bool = False):
    env = beta_mod.build_beta_envelope(
        beta_hypotheses(db, include_conditional) or None)
    full = beta_mod.full_envelope(env)
    alpha = Q(alpha)
    vals = [(p.value(alpha), p.provenance) for p in full.pieces if p.covers(alpha)]
    if not vals:
        return None, ""
    return min(vals)


def query_mu(db: Database, sigma: Fraction, include_conditional: bool = False):
    return mu_mod.mu_value_at(mu_hypotheses(db, include_conditional), sigma,
                              include_conditional)


def query_lv(db: Database, sigma: Fraction, tau: Fraction, zeta: bool = False,
             include_conditional: bool = False):
    kind = lv_mod.LVZ if zeta else lv_mod.LV
    hyps = []
    for h in db.records("lvz-bound" if zeta else "lv-bound"):
        if h.conditional and not include_conditional:
            continue
        hyps.append(lv_hypothesis(db, h))
    if not hyps:
        return None, []
    return lv_mod.bound_at(hyps, sigma, tau)


def query_density(db: Database, sigma: Fraction, include_conditional: bool = False):
    """Best A(sigma) bound: minimum over data rows and derivations."""
    sigma = Q(sigma)
    best, best_id = None, ""
    for h in db.records("density-bound"):
        if h.conditional and not include_conditional:
            continue
        lo, hi = qparse(h.get("lo")), qparse(h.get("hi"))
        if not (lo <= sigma <= hi):
            continue
        frac = zd_mod.LinFrac(qparse(h.get("num")), qparse(h.get("den_a")),
                              qparse(h.get("den_b")))
        v = frac.value(sigma)
        if best is None or v < best:
            best, best_id = v, h.hid
    return best, best_id


def query_energy(db: Database, sigma: Fraction):
    sigma = Q(sigma)
    best, best_id = None, ""
    for rec in energy_mod.ENERGY_TABLE:
        if rec.lo <= sigma <= rec.hi:
            v = rec.value(sigma) / (1 - sigma)
            if best is None or v < best:
                best, best_id = v, rec.hid
    return best, best_id


# -- closure --------------------------------------------------------------------

def expand_closure(db: Database, rules: Sequence[str] = ("pairs", "beta", "mu"),
                   depth: int = 4, max_pairs: int = 400) -> Database:
    """Grow the store to a fixpoint (or the budget cap) under the pair
    processes, envelope duality and pair-to-mu rules; deterministic output.

    Expanding an already-expanded database adds nothing.
    """
    out = Database()
    for h in db.records():
        out.add(h)
    if "pairs" in rules:
        base = [(h.hid, _pair_of(db, h.hid)) for h in db.records("exponent-pair")]
        env = beta_mod.full_envelope(beta_mod.derivation_envelope())
        closed = ep.hull_closure([p for _, p in base], depth=depth,
                                 beta_env=env, max_pairs=max_pairs)
        known = {p.key() for _, p in base}
        for p in closed:
            if p.key() in known:
                continue
            hid = f"pair:{p.certificate}"
            if hid in out:
                continue
            root = p.certificate
            word = []
            while root and root[0] in "ABCD" and "(" in root:
                word.append(root[0])
                root = root[root.index("(") + 1:root.rindex(")")]
            if root not in out:
                continue
            out.add(record(hid, "exponent-pair", "process closure",
                           deps=[root], rule="process", word="".join(word),
                           k=qstr(p.k), l=qstr(p.l)))
    if "beta" in rules:
        for h in out.records("exponent-pair"):
            dual_id = f"beta:dual({h.hid})"
            if dual_id in out:
                continue
            p = _pair_of(out, h.hid)
            out.add(record(dual_id, "beta-bound", f"dual line of {p}",
                           deps=[h.hid], rule="pair-to-beta",
                           pieces=beta_pieces_field(ep.pair_to_beta(p))))
    if "mu" in rules:
        for h in out.records("exponent-pair"):
            mu_id = f"mu:pair({h.hid})"
            if mu_id in out:
                continue
            p = _pair_of(out, h.hid)
            m = mu_mod.mu_from_pair(p)
            out.add(record(mu_id, "mu-bound", f"from exponent pair {p}",
                           deps=[h.hid], rule="mu-from-pair",
                           sigma=qstr(m.sigma), value=qstr(m.value)))
    return out
