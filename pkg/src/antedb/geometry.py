"""Exact rational polytope calculus over named exponent variables.

Regions are finite unions of closed convex polytopes, each given by affine
constraints ``form >= 0`` / ``form == 0`` over a shared ordered variable
list.  A bound of the shape ``value <= max(e1, ..., en)`` is a union of n
polytopes; ``value <= min(...)`` is an intersection.  All operations are
pure and exact; re-running anything is bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import lp
from .num import NEG_INF, POS_INF, Q, qstr

# Fixed variable vocabulary (ASCII spellings of the exponent symbols).
# t1/t2/t3 are scratch names used internally by slack-and-project
# constructions (subdivision, reflection, power raising); they never appear
# in stored hypotheses.
VOCABULARY = ("alpha", "beta", "sigma", "tau", "rho", "rho*", "s", "k", "l",
              "t1", "t2", "t3")

# Fourier-Motzkin safety valve: hard error, never silent truncation.
FM_CONSTRAINT_LIMIT = 4000
# Above this many constraints we run an LP-based redundancy sweep.
_PRUNE_THRESHOLD = 40


class VariableError(ValueError):
    """Raised for names outside the vocabulary or mismatched variable lists."""


class FMBlowupError(RuntimeError):
    """Fourier-Motzkin intermediate system exceeded the configured limit."""


def _check_vars(names: Iterable[str]) -> tuple[str, ...]:
    out = tuple(names)
    for v in out:
        if v not in VOCABULARY:
            raise VariableError(f"unknown variable {v!r}; vocabulary is {VOCABULARY}")
    if len(set(out)) != len(out):
        raise VariableError(f"duplicate variable in {out}")
    return out


@dataclass(frozen=True)
class AffineForm:
    """Sparse affine expression: sum of coeff*var plus a constant."""

    coeffs: tuple[tuple[str, Fraction], ...]
    const: Fraction

    def coeff(self, var: str) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Q(0)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for v, c in self.coeffs:
            total += c * Q(point[v])
        return total

    def substitute(self, assignment: Mapping[str, Fraction]) -> "AffineForm":
        coeffs = {}
        const = self.const
        for v, c in self.coeffs:
            if v in assignment:
                const += c * Q(assignment[v])
            else:
                coeffs[v] = c
        return affine(coeffs, const)

    def rename(self, mapping: Mapping[str, str]) -> "AffineForm":
        return affine({mapping.get(v, v): c for v, c in self.coeffs}, self.const)

    def scale_vars(self, factors: Mapping[str, Fraction]) -> "AffineForm":
        """Replace each var v by factors[v] * v (used by power-raising maps)."""
        return affine({v: c * Q(factors.get(v, 1)) for v, c in self.coeffs}, self.const)

    def __add__(self, other: "AffineForm") -> "AffineForm":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs:
            coeffs[v] = coeffs.get(v, Q(0)) + c
        return affine(coeffs, self.const + other.const)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def __neg__(self) -> "AffineForm":
        return affine({v: -c for v, c in self.coeffs}, -self.const)

    def __mul__(self, scalar) -> "AffineForm":
        s = Q(scalar)
        return affine({v: c * s for v, c in self.coeffs}, self.const * s)

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        if self.const != 0 or not self.coeffs:
            parts.append(qstr(self.const))
        for v, c in self.coeffs:
            if c == 1:
                parts.append(v)
            else:
                parts.append(f"{qstr(c)}*{v}")
        return " + ".join(parts).replace("+ -", "- ")


def affine(coeffs: Optional[Mapping[str, Fraction]] = None, const=0) -> AffineForm:
    """Build an AffineForm; zero coefficients are dropped, names validated."""
    items = []
    if coeffs:
        for v, c in coeffs.items():
            if v not in VOCABULARY:
                raise VariableError(f"unknown variable {v!r}")
            c = Q(c)
            if c != 0:
                items.append((v, c))
    items.sort()
    return AffineForm(tuple(items), Q(const))


def var(name: str) -> AffineForm:
    return affine({name: Q(1)})


def const(value) -> AffineForm:
    return affine({}, value)


@dataclass(frozen=True)
class Halfspace:
    """Constraint ``form >= 0`` (or ``form == 0`` when equality)."""

    form: AffineForm
    equality: bool = False

    def satisfied(self, point: Mapping[str, Fraction]) -> bool:
        v = self.form.evaluate(point)
        return v == 0 if self.equality else v >= 0

    def normalized(self) -> "Halfspace":
        """Primitive-integer representation for deduplication."""
        coeffs = self.form.coeffs
        nums = [c for _, c in coeffs] + [self.form.const]
        if all(n == 0 for n in nums):
            return self
        from math import gcd, lcm
        denom = lcm(*(n.denominator for n in nums)) if nums else 1
        ints = [int(n * denom) for n in nums]
        g = 0
        for n in ints:
            g = gcd(g, abs(n))
        scale = Q(denom, g if g else 1)
        return Halfspace(self.form * scale, self.equality)

    def __str__(self) -> str:
        return f"{self.form} {'=' if self.equality else '>='} 0"


def ge(form: AffineForm, rhs: AffineForm | int | Fraction = 0) -> Halfspace:
    """form >= rhs."""
    rhs_f = rhs if isinstance(rhs, AffineForm) else const(rhs)
    return Halfspace(form - rhs_f)


def le(form: AffineForm, rhs: AffineForm | int | Fraction = 0) -> Halfspace:
    """form <= rhs."""
    rhs_f = rhs if isinstance(rhs, AffineForm) else const(rhs)
    return Halfspace(rhs_f - form)


def eq(form: AffineForm, rhs: AffineForm | int | Fraction = 0) -> Halfspace:
    rhs_f = rhs if isinstance(rhs, AffineForm) else const(rhs)
    return Halfspace(form - rhs_f, equality=True)


@dataclass(frozen=True)
class Polytope:
    """Closed convex set: conjunction of halfspace constraints."""

    variables: tuple[str, ...]
    constraints: tuple[Halfspace, ...]

    # -- basic queries ----------------------------------------------------

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        return all(h.satisfied(point) for h in self.constraints)

    def _lp_constraints(self):
        idx = {v: i for i, v in enumerate(self.variables)}
        rows = []
        for h in self.constraints:
            coeffs = [Q(0)] * len(self.variables)
            for v, c in h.form.coeffs:
                coeffs[idx[v]] = c
            rows.append((coeffs, h.form.const, h.equality))
        return rows

    def _quick_empty_status(self) -> Optional[bool]:
        """Cheap emptiness pre-check: True/False when decidable without an LP.

        Tightens per-variable intervals from single-variable constraints
        (conflict proves emptiness), then tests the interval midpoint
        against everything (success proves nonemptiness).
        """
        lo: dict[str, Fraction] = {}
        hi: dict[str, Fraction] = {}
        for h in self.constraints:
            coeffs = h.form.coeffs
            if not coeffs:
                if (h.equality and h.form.const != 0) or h.form.const < 0:
                    return True
                continue
            if len(coeffs) != 1:
                continue
            v, c = coeffs[0]
            bound = -h.form.const / c
            if h.equality:
                if lo.get(v, bound) > bound or hi.get(v, bound) < bound:
                    return True
                lo[v] = hi[v] = bound
            elif c > 0:
                lo[v] = max(lo.get(v, bound), bound)
            else:
                hi[v] = min(hi.get(v, bound), bound)
        point = {}
        for v in self.variables:
            a, b = lo.get(v), hi.get(v)
            if a is not None and b is not None:
                if a > b:
                    return True
                point[v] = (a + b) / 2
            else:
                point[v] = a if a is not None else (b if b is not None else Q(0))
        if self.contains(point):
            return False
        return None

    def is_empty(self) -> bool:
        quick = self._quick_empty_status()
        if quick is not None:
            return quick
        status, _, _ = lp.solve_lp(len(self.variables), [Q(0)] * len(self.variables),
                                   self._lp_constraints())
        return status == lp.INFEASIBLE

    def feasible_point(self) -> Optional[dict[str, Fraction]]:
        status, _, x = lp.solve_lp(len(self.variables), [Q(0)] * len(self.variables),
                                   self._lp_constraints())
        if status == lp.INFEASIBLE:
            return None
        return dict(zip(self.variables, x))

    # -- optimization ------------------------------------------------------

    def maximize(self, objective: AffineForm):
        """Exact sup of the objective; -inf on empty, +inf when unbounded."""
        for v in objective.variables:
            if v not in self.variables:
                raise VariableError(f"objective variable {v!r} not in polytope")
        idx = {v: i for i, v in enumerate(self.variables)}
        obj = [Q(0)] * len(self.variables)
        for v, c in objective.coeffs:
            obj[idx[v]] = c
        status, value, x = lp.solve_lp(len(self.variables), obj, self._lp_constraints())
        if status == lp.INFEASIBLE:
            return NEG_INF, None
        if status == lp.UNBOUNDED:
            return POS_INF, None
        return value + objective.const, dict(zip(self.variables, x))

    def minimize(self, objective: AffineForm):
        value, point = self.maximize(-objective)
        if value == NEG_INF:
            return POS_INF, None  # empty set: inf over it is +inf
        if value == POS_INF:
            return NEG_INF, None  # unbounded below
        return -value, point

    def maximize_ratio(self, num: AffineForm, den: AffineForm):
        """Exact sup of num/den; requires den > 0 on the polytope.

        Returns -inf on empty input.  Uses the denominator-normalizing
        change of variables (y = t*x, t >= 0, den(y,t) = 1), which reduces
        the fractional program to a single LP and is exact for closed
        polytopes with positive denominators.
        """
        if self.is_empty():
            return NEG_INF, None
        dmin, witness = self.maximize(-den)
        # dmin is sup(-den), so inf(den) = -dmin (or -inf if dmin is +inf).
        den_inf = NEG_INF if dmin == POS_INF else -dmin
        if den_inf <= 0:
            raise ValueError(
                f"denominator not positive on polytope (min {qstr(den_inf)} at {witness})")
        # Homogenize: variables y_i (one per original var) plus t.
        hvars = list(self.variables)
        n = len(hvars)
        rows = []
        idx = {v: i for i, v in enumerate(hvars)}

        def hrow(form: AffineForm):
            coeffs = [Q(0)] * (n + 1)
            for v, c in form.coeffs:
                coeffs[idx[v]] = c
            coeffs[n] = form.const  # constant rides on t
            return coeffs

        for h in self.constraints:
            rows.append((hrow(h.form), Q(0), h.equality))
        tcol = [Q(0)] * (n + 1)
        tcol[n] = Q(1)
        rows.append((tcol, Q(0), False))          # t >= 0
        rows.append((hrow(den), Q(-1), True))     # den(y, t) == 1
        obj = hrow(num)
        status, value, x = lp.solve_lp(n + 1, obj, rows)
        if status == lp.INFEASIBLE:
            return NEG_INF, None
        if status == lp.UNBOUNDED:
            return POS_INF, None
        t = x[n]
        point = None
        if t > 0:
            point = {v: x[i] / t for i, v in enumerate(hvars)}
        return value, point

    # -- restriction / mapping ---------------------------------------------

    def with_constraints(self, extra: Iterable[Halfspace]) -> "Polytope":
        extra = tuple(extra)
        for h in extra:
            for v in h.form.variables:
                if v not in self.variables:
                    raise VariableError(f"constraint variable {v!r} not in polytope")
        return Polytope(self.variables, self.constraints + extra)

    def substitute(self, assignment: Mapping[str, Fraction]) -> "Polytope":
        """Fix some variables to rational values (partial evaluation)."""
        newvars = tuple(v for v in self.variables if v not in assignment)
        cons = []
        for h in self.constraints:
            f = h.form.substitute(assignment)
            cons.append(Halfspace(f, h.equality))
        return Polytope(newvars, tuple(cons))

    def rename(self, mapping: Mapping[str, str]) -> "Polytope":
        newvars = _check_vars(mapping.get(v, v) for v in self.variables)
        return Polytope(newvars, tuple(Halfspace(h.form.rename(mapping), h.equality)
                                       for h in self.constraints))

    def scale_vars(self, factors: Mapping[str, Fraction]) -> "Polytope":
        """Image under v -> factors[v] * v, i.e. substitute v/factors[v]."""
        inv = {v: Q(1) / Q(f) for v, f in factors.items()}
        return Polytope(self.variables,
                        tuple(Halfspace(h.form.scale_vars(inv), h.equality)
                              for h in self.constraints))

    # -- projection (Fourier-Motzkin) ---------------------------------------

    def project(self, keep: Sequence[str], limit: int = FM_CONSTRAINT_LIMIT) -> "Polytope":
        keep = tuple(keep)
        for v in keep:
            if v not in self.variables:
                raise VariableError(f"projection variable {v!r} not in polytope")
        drop = [v for v in self.variables if v not in keep]
        cons = list(self.constraints)
        while drop:
            # fewest-products heuristic
            best_v, best_cost = None, None
            for v in drop:
                pos = neg = 0
                for h in cons:
                    c = h.form.coeff(v)
                    if h.equality and c != 0:
                        pos, neg = 0, 0  # substitution is free
                        break
                    if c > 0:
                        pos += 1
                    elif c < 0:
                        neg += 1
                cost = pos * neg
                if best_cost is None or cost < best_cost:
                    best_v, best_cost = v, cost
            cons = _eliminate(cons, best_v, limit)
            drop.remove(best_v)
        cons = _simplify(cons)
        return Polytope(keep, tuple(cons))

    def normalized(self) -> "Polytope":
        """Best-effort redundancy removal; semantic equality is the contract."""
        cons = _simplify(list(self.constraints))
        if len(cons) > 1:
            cons = _lp_prune(self.variables, cons)
        return Polytope(self.variables, tuple(cons))

    def __str__(self) -> str:
        body = ", ".join(str(h) for h in self.constraints)
        return f"{{{', '.join(self.variables)} : {body}}}"


_INFEASIBLE_MARK = "infeasible"


def _simplify(cons: list[Halfspace]) -> list[Halfspace]:
    """Drop trivial constraints, dedupe, keep the binding of parallel pairs."""
    seen: dict[tuple, Halfspace] = {}
    out: list[Halfspace] = []
    for h in cons:
        h = h.normalized()
        if not h.form.coeffs:
            if (h.equality and h.form.const != 0) or (not h.equality and h.form.const < 0):
                # Infeasible constant constraint: collapse to a canonical empty set.
                return [Halfspace(affine({}, -1))]
            continue
        key = (h.form.coeffs, h.equality)
        prev = seen.get(key)
        if prev is None:
            seen[key] = h
        else:
            if h.equality:
                if h.form.const != prev.form.const:
                    return [Halfspace(affine({}, -1))]
            elif h.form.const < prev.form.const:
                seen[key] = h  # smaller const = tighter (coeffs.x >= -const)
    out = list(seen.values())
    out.sort(key=lambda h: (h.form.coeffs, h.equality, h.form.const))
    return out


def _lp_prune(variables: tuple[str, ...], cons: list[Halfspace]) -> list[Halfspace]:
    """Remove constraints implied by the rest (only attempted on big systems)."""
    if len(cons) <= _PRUNE_THRESHOLD:
        return cons
    kept = list(cons)
    i = 0
    while i < len(kept):
        h = kept[i]
        if h.equality:
            i += 1
            continue
        rest = kept[:i] + kept[i + 1:]
        p = Polytope(variables, tuple(rest))
        value, _ = p.maximize(-h.form)
        # h redundant iff max of -form <= 0, i.e. form >= 0 everywhere on rest
        if value != POS_INF and value != NEG_INF and value <= 0:
            kept.pop(i)
        else:
            i += 1
    return kept


def _eliminate(cons: list[Halfspace], v: str, limit: int) -> list[Halfspace]:
    cons = _simplify(cons)
    # Prefer solving an equality for v.
    for i, h in enumerate(cons):
        if h.equality:
            c = h.form.coeff(v)
            if c != 0:
                # v = -(rest)/c
                rest = h.form - affine({v: c})
                sub = rest * (Q(-1) / c)
                out = []
                for j, other in enumerate(cons):
                    if j == i:
                        continue
                    cv = other.form.coeff(v)
                    if cv == 0:
                        out.append(other)
                    else:
                        f = (other.form - affine({v: cv})) + cv * sub
                        out.append(Halfspace(f, other.equality))
                return _simplify(out)
    lower, upper, rest = [], [], []
    for h in cons:
        c = h.form.coeff(v)
        if c > 0:
            lower.append(h)   # c*v + r >= 0  =>  v >= -r/c
        elif c < 0:
            upper.append(h)   # v <= -r/c
        else:
            rest.append(h)
    new = list(rest)
    for hl in lower:
        cl = hl.form.coeff(v)
        for hu in upper:
            cu = hu.form.coeff(v)
            f = (-cu) * hl.form + cl * hu.form  # v cancels
            new.append(Halfspace(f))
            if len(new) > limit:
                raise FMBlowupError(
                    f"Fourier-Motzkin exceeded {limit} constraints eliminating {v!r}")
    return _simplify(new)


@dataclass(frozen=True)
class Region:
    """Finite union of polytopes over a common variable list (empty = empty set)."""

    variables: tuple[str, ...]
    pieces: tuple[Polytope, ...]

    def __post_init__(self):
        for p in self.pieces:
            if p.variables != self.variables:
                raise VariableError(
                    f"piece variables {p.variables} != region variables {self.variables}")

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        return any(p.contains(point) for p in self.pieces)

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.pieces)

    def drop_empty(self) -> "Region":
        return Region(self.variables, tuple(p for p in self.pieces if not p.is_empty()))

    def intersect(self, other: "Region") -> "Region":
        if other.variables != self.variables:
            raise VariableError(
                f"variable lists differ: {self.variables} vs {other.variables}")
        pieces = []
        seen = set()
        for a in self.pieces:
            for b in other.pieces:
                cons = _simplify(list(a.constraints + b.constraints))
                key = tuple((h.form.coeffs, h.form.const, h.equality) for h in cons)
                if key in seen:
                    continue
                cand = Polytope(self.variables, tuple(cons))
                if not cand.is_empty():
                    seen.add(key)
                    pieces.append(cand)
        return Region(self.variables, tuple(pieces))

    def union(self, other: "Region") -> "Region":
        if other.variables != self.variables:
            raise VariableError(
                f"variable lists differ: {self.variables} vs {other.variables}")
        return Region(self.variables, self.pieces + other.pieces)

    def with_constraints(self, extra: Iterable[Halfspace]) -> "Region":
        extra = tuple(extra)
        return Region(self.variables, tuple(p.with_constraints(extra) for p in self.pieces))

    def substitute(self, assignment: Mapping[str, Fraction]) -> "Region":
        newvars = tuple(v for v in self.variables if v not in assignment)
        return Region(newvars, tuple(p.substitute(assignment) for p in self.pieces))

    def rename(self, mapping: Mapping[str, str]) -> "Region":
        pieces = tuple(p.rename(mapping) for p in self.pieces)
        newvars = pieces[0].variables if pieces else _check_vars(
            mapping.get(v, v) for v in self.variables)
        return Region(newvars, pieces)

    def scale_vars(self, factors: Mapping[str, Fraction]) -> "Region":
        return Region(self.variables, tuple(p.scale_vars(factors) for p in self.pieces))

    def project(self, keep: Sequence[str], limit: int = FM_CONSTRAINT_LIMIT) -> "Region":
        keep = tuple(keep)
        pieces = tuple(p.project(keep, limit) for p in self.pieces)
        return Region(keep, tuple(p for p in pieces if not p.is_empty()))

    def maximize(self, objective: AffineForm):
        best = NEG_INF
        for p in self.pieces:
            value, _ = p.maximize(objective)
            if value == POS_INF:
                return POS_INF
            if value != NEG_INF and (best == NEG_INF or value > best):
                best = value
        return best

    def maximize_ratio(self, num: AffineForm, den: AffineForm):
        best = NEG_INF
        for p in self.pieces:
            value, _ = p.maximize_ratio(num, den)
            if value == POS_INF:
                return POS_INF
            if value != NEG_INF and (best == NEG_INF or value > best):
                best = value
        return best


def region(variables: Sequence[str], pieces: Iterable[Polytope]) -> Region:
    return Region(_check_vars(variables), tuple(pieces))


def polytope(variables: Sequence[str], constraints: Iterable[Halfspace]) -> Polytope:
    variables = _check_vars(variables)
    constraints = tuple(constraints)
    for h in constraints:
        for v in h.form.variables:
            if v not in variables:
                raise VariableError(f"constraint uses {v!r}, not in {variables}")
    return Polytope(variables, constraints)


def box(variables: Sequence[str], bounds: Mapping[str, tuple]) -> list[Halfspace]:
    """Halfspaces lo <= v <= hi; either side may be None for one-sided boxes."""
    out = []
    for v, (lo, hi) in bounds.items():
        if lo is not None:
            out.append(ge(var(v), Q(lo)))
        if hi is not None:
            out.append(le(var(v), Q(hi)))
    return out
