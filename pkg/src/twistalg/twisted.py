"""Series-embedded twisted subrings R = S ∩ D⁻¹(K).

A :class:`Scenario` fixes three variable names (x, y, Z) and power series
y ↦ y_embed, Z ↦ z_embed in k[[x]].  With A = k[x, y] localized at (x, y),
S = W[y] localized at (x, y) where W = k(x, z) ∩ k[[x]], D = c·∂/∂Z for a
nonzero constant c, C the powers of x and K the lattice {val ≥ v0} (or all
of K_C when v0 is None), every element of S is written P/(x^e·u) with u a
polynomial unit.  Everything below is exact up to the series precision N,
which is tracked explicitly; nothing is rounded.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core.expr import BinOp, Neg, Num, Pow, Var, to_fraction
from .core.fields import CoefficientField
from .core.finite import (FiniteAlgebra, box_algebra, ideal_of, ideal_times_module,
                          maximal_ideal, module_from_generator_action, FiniteModule)
from .core.linalg import Subspace, kernel, linear_solve, rank
from .core.localfrac import LocalFraction
from .core.poly import Polynomial
from .core.presentation import RingPresentation
from .core.series import AtLeast, LaurentSeries, TruncatedSeries, liouville
from .derivations import DerivationSpec, derive
from .errors import BoundsError, PrecisionError
from .idealization import (IdealizationElement, IdealizationRing, embedding_dimension,
                           ideal_span)

YES, NO, INDETERMINATE = "yes", "no", "indeterminate"
_DEFAULT = object()


@dataclass(frozen=True)
class MembershipVerdict:
    element: str
    in_R: str
    valuation_evidence: object = None
    in_S: Optional[bool] = True
    derivative: str = ""
    reason: str = ""

    @property
    def determinate(self) -> bool:
        return self.in_R != INDETERMINATE

    def summary(self) -> str:
        if self.in_S is False:
            return "no (not in S)"
        if self.in_S is None:
            return f"indeterminate ({self.reason})"
        ev = self.valuation_evidence
        if ev is None:
            return f"{self.in_R} (D = 0)"
        if isinstance(ev, AtLeast):
            return f"{self.in_R} (val {ev})"
        return f"{self.in_R} (val = {ev})"

    def to_json(self) -> dict:
        ev = self.valuation_evidence
        if isinstance(ev, AtLeast):
            ev = ev.to_json()
        return {"element": self.element, "in_R": self.in_R, "in_S": self.in_S,
                "valuation": ev, "derivative": self.derivative}


class Scenario:
    def __init__(self, field: CoefficientField, precision: int, y_embed: TruncatedSeries,
                 z_embed: TruncatedSeries, v0: Optional[int] = 0, y_degree: int = 6,
                 names: Tuple[str, str, str] = ("x", "y", "Z"), dz=1, max_exponent: int = 3,
                 name: str = "scenario"):
        self.field = field
        self.N = precision
        self.names = tuple(names)
        self.x, self.y, self.Z = self.names
        if len(set(self.names)) != 3:
            raise ValueError("scenario variable names must be distinct")
        # a series may be given as a callable N -> TruncatedSeries so that
        # raising the precision regrows it instead of zero-padding
        self._sources = (y_embed, z_embed)
        self.y_embed = self._fit(y_embed)
        self.z_embed = self._fit(z_embed)
        for label, s in (("y", self.y_embed), ("z", self.z_embed)):
            v = s.valuation()
            if isinstance(v, AtLeast):
                raise ValueError(f"{label}_embed vanishes to precision {self.N}")
            if v < 1:
                raise ValueError(f"{label}_embed must have positive valuation (found {v})")
        self.v0 = v0
        self.d = y_degree
        self.max_exponent = max_exponent
        self.dz = field.coerce(dz)
        if field.is_zero(self.dz):
            raise ValueError("D(Z) must be a nonzero constant")
        self.name = name
        self.ring = RingPresentation(field, self.names, (), self.names, (self.x,),
                                     ((self.y, self.y_embed), (self.Z, self.z_embed)))
        self.D = DerivationSpec(self.ring, {self.Z: self.dz}, linearity_base=(self.x, self.y))
        self._pow_cache: Dict[Tuple[int, int], TruncatedSeries] = {}

    @classmethod
    def gl(cls, field: CoefficientField = None, precision: int = 24, v0: Optional[int] = 0,
           y_degree: int = 6, **kw) -> "Scenario":
        """z = Σ x^(i!), y = Σ x^((2i)!) over F5 by default."""
        field = field or CoefficientField.prime(5)
        kw.setdefault("name", "GL")
        return cls(field, precision, lambda n: liouville(field, n, 2), lambda n: liouville(field, n, 1),
                   v0=v0, y_degree=y_degree, **kw)

    def with_bounds(self, precision: int = None, y_degree: int = None) -> "Scenario":
        """Same scenario at new bounds; explicit series are zero-padded or cut."""
        return Scenario(self.field, precision or self.N, self._sources[0], self._sources[1],
                        self.v0, y_degree or self.d, self.names, self.dz, self.max_exponent, self.name)

    def _fit(self, s) -> TruncatedSeries:
        if callable(s):
            return s(self.N)
        if s.precision == self.N:
            return s
        return TruncatedSeries(self.field, self.N, list(s.coeffs)[: self.N], s.var)

    def __repr__(self):
        k = "K_C" if self.v0 is None else f"val >= {self.v0}"
        return f"Scenario({self.name}, {self.field.name}, N={self.N}, K: {k}, y-degree {self.d})"

    # -- elements ----------------------------------------------------------

    def element(self, text_or_expr) -> LocalFraction:
        return to_fraction(text_or_expr, self.field, self.names, self.names, (self.x,))

    def lift(self, f) -> LocalFraction:
        if isinstance(f, (str, Num, Var, Neg, BinOp, Pow)):
            return self.element(f)
        if isinstance(f, LocalFraction):
            if f.variables != self.names:
                raise ValueError("element over a different variable list")
            return f
        if isinstance(f, Polynomial):
            if f.variables != self.names:
                f = f.change_variables(self.names)
            return LocalFraction(f, None, self.names, (self.x,))
        return LocalFraction(Polynomial.constant(self.field, self.names, f), None, self.names, (self.x,))

    def var(self, name: str) -> LocalFraction:
        return self.lift(Polynomial.var(self.field, self.names, name))

    def poly(self, coeffs: Sequence, var: str = None) -> Polynomial:
        var = var or self.x
        out = Polynomial.zero(self.field, self.names)
        for i, c in enumerate(coeffs):
            if c:
                out = out + Polynomial.var(self.field, self.names, var, i).scale(c)
        return out

    def derivative(self, f) -> LocalFraction:
        return self.lift(derive(self.D, self.lift(f)))

    # -- embedding ---------------------------------------------------------

    def _yz_power(self, b: int, c: int) -> TruncatedSeries:
        key = (b, c)
        s = self._pow_cache.get(key)
        if s is None:
            if b == 0 and c == 0:
                s = TruncatedSeries(self.field, self.N, [1])
            elif c > 0:
                s = self._yz_power(b, c - 1) * self.z_embed
            else:
                s = self._yz_power(b - 1, 0) * self.y_embed
            self._pow_cache[key] = s
        return s

    def embed_poly(self, p: Polynomial) -> TruncatedSeries:
        """Image in k[[x]]/(x^N) under y ↦ y_embed, Z ↦ z_embed."""
        f, N = self.field, self.N
        out = [0] * N
        for (a, b, c), coef in p.terms.items():
            if a >= N:
                continue
            s = self._yz_power(b, c).coeffs
            for i in range(N - a):
                if s[i]:
                    out[a + i] += coef * s[i]
        return TruncatedSeries(f, N, [f.reduce(v) for v in out])

    def split(self, f: LocalFraction) -> Tuple[Polynomial, int, Polynomial]:
        """f = P / (x^e · u) with u a unit."""
        e = f.denominator_content()[0]
        return f.num, e, f.unit_part()

    def embed(self, f) -> LaurentSeries:
        """Laurent expansion of f, exact modulo x^(N - e)."""
        f = self.lift(f)
        P, e, u = self.split(f)
        num = LaurentSeries.from_truncated(self.embed_poly(P))
        if not u.is_constant():
            num = num * LaurentSeries.from_truncated(self.embed_poly(u)).inverse()
        elif u.constant_term() != self.field.one:
            num = num.scale(self.field.inv(u.constant_term()))
        return num.shift(-e).with_precision(self.N - e)

    def in_S(self, f) -> Optional[bool]:
        """f ∈ S iff every y-coefficient of the numerator has val ≥ e after Z ↦ z."""
        f = self.lift(f)
        P, e, _ = self.split(f)
        if e == 0:
            return True
        unknown = False
        for Pj in P.coefficients_in(self.y).values():
            v = self.embed_poly(Pj).valuation()
            if isinstance(v, AtLeast):
                if e > v.bound:
                    unknown = True
            elif v < e:
                return False
        return None if unknown else True

    def in_max_ideal(self, f) -> bool:
        """f ∈ m_S, for f ∈ S: the constant term of its expansion vanishes."""
        return self.field.is_zero(self.embed(f).coefficient(0)) if self.in_S(f) else False

    # -- membership --------------------------------------------------------

    def membership(self, f, threshold=_DEFAULT) -> MembershipVerdict:
        """Is f in S ∩ D⁻¹({val ≥ threshold})?  threshold None means K_C."""
        f = self.lift(f)
        v0 = self.v0 if threshold is _DEFAULT else threshold
        s = self.in_S(f)
        if s is False:
            return MembershipVerdict(str(f), NO, None, False)
        if s is None:
            return MembershipVerdict(str(f), INDETERMINATE, None, None,
                                     reason=f"S-membership needs precision beyond {self.N}")
        df = self.derivative(f)
        if df.is_zero():
            return MembershipVerdict(str(f), YES, None, True, "0")
        if v0 is None:
            return MembershipVerdict(str(f), YES, None, True, str(df), "K = K_C")
        val = self.embed(df).valuation()
        if isinstance(val, AtLeast):
            if val.bound >= v0:
                return MembershipVerdict(str(f), YES, val, True, str(df))
            return MembershipVerdict(str(f), INDETERMINATE, val, True, str(df),
                                     reason=f"D(f) vanishes modulo x^{val.bound}")
        return MembershipVerdict(str(f), YES if val >= v0 else NO, val, True, str(df))

    def is_member(self, f, threshold=_DEFAULT) -> bool:
        v = self.membership(f, threshold)
        if v.in_R == INDETERMINATE:
            raise PrecisionError(f"membership of {v.element} is indeterminate: {v.reason}")
        return v.in_R == YES

    # -- fixed element families ----------------------------------------------

    def p_poly(self, j: int) -> Polynomial:
        """Terms of z_embed of degree ≤ j, as a polynomial in x."""
        if j >= self.N:
            raise PrecisionError(f"truncation order {j} needs precision beyond {self.N}")
        return self.poly(self.z_embed.coeffs[: j + 1])

    def sigma(self, k: int) -> LocalFraction:
        """An element of S with D(sigma(k)) = x^k exactly."""
        inv = self.field.inv(self.dz)
        Z = Polynomial.var(self.field, self.names, self.Z)
        if k >= 0:
            return self.lift((Polynomial.var(self.field, self.names, self.x, k) * Z).scale(inv))
        j = -k
        num = (Z - self.p_poly(j)).scale(inv)
        return self.lift(num) / self.lift(Polynomial.var(self.field, self.names, self.x, j))

    def monomial(self, i: int, j: int) -> LocalFraction:
        return self.lift(Polynomial.monomial(self.field, self.names, (i, j, 0)))

    def member_family(self, e: int) -> List[LocalFraction]:
        """Members spanning R modulo x^e R (and y^d): x^i y^j and sigma(v0 + t)."""
        fam = [self.monomial(i, j) for i in range(e) for j in range(self.d)]
        if self.v0 is not None:
            fam += [self.sigma(self.v0 + t) for t in range(e)]
        return fam

    def extra_members(self, e: int) -> List[LocalFraction]:
        """Further members with x-power denominators and y-degree < d."""
        Z = self.var(self.Z)
        x = self.var(self.x)
        y = self.var(self.y)
        cands = [Z * Z, Z * Z / x, Z * y, x ** e * Z]
        if self.v0 is not None:
            base = self.v0
            cands += [x ** e * self.sigma(base - 1), y * self.sigma(base), self.sigma(base) * self.sigma(base + 1),
                      x ** (e + 1) * self.sigma(base - 1), self.sigma(base) * self.sigma(base)]
        out = []
        for c in cands:
            if c.num.degree(self.y) >= self.d:
                continue
            try:
                if self.membership(c).in_R == YES:
                    out.append(c)
            except PrecisionError:
                continue
        return out

    # -- models of S/x^e S ⋆ K/x^e K -----------------------------------------

    def model(self, e: int) -> "IdealizationModel":
        return IdealizationModel(self, e)


class IdealizationModel:
    """S/(x^e, y^d) ⋆ K/x^e K, with S acting on K through the embedding."""

    def __init__(self, sc: Scenario, e: int):
        if e < 1:
            raise ValueError("model exponent must be positive")
        if e > sc.N:
            raise PrecisionError(f"x^{e} model needs precision beyond {sc.N}")
        self.sc, self.e = sc, e
        f = sc.field
        self.box = box_algebra(f, (sc.x, sc.y), (e, sc.d))
        if sc.v0 is None:
            labels, mats = [], {sc.x: [], sc.y: []}
        else:
            labels = [f"x^{sc.v0 + i}" for i in range(e)]
            shift = [[f.one if r == c + 1 else f.zero for c in range(e)] for r in range(e)]
            ycoef = sc.y_embed.coeffs
            ymat = [[f.reduce(ycoef[r - c]) if r >= c else f.zero for c in range(e)] for r in range(e)]
            mats = {sc.x: shift, sc.y: ymat}
        try:
            self.module = module_from_generator_action(self.box, labels, mats)
        except BoundsError as exc:
            raise BoundsError(f"y-degree bound {sc.d} too small for the x^{e} model: {exc}") from None
        self.ring = IdealizationRing(self.box, self.module)
        self._inverse_cache: Dict[Polynomial, tuple] = {}

    @property
    def dims(self) -> Tuple[int, int]:
        return self.box.dim, self.module.dim

    def _box_of(self, P: Polynomial, shift: int) -> tuple:
        """Image of P/x^shift (assumed in S) in k[x,y]/(x^e, y^d)."""
        sc, e = self.sc, self.e
        if shift + e > sc.N:
            raise PrecisionError(f"reduction mod x^{e} of an element with x^{shift} in the denominator "
                                 f"needs precision {shift + e} > {sc.N}")
        out = [sc.field.zero] * self.box.dim
        for j, Pj in P.coefficients_in(sc.y).items():
            if j >= sc.d:
                continue
            s = sc.embed_poly(Pj).coeffs
            for i in range(e):
                c = s[shift + i]
                if c:
                    out[self.box._index[(i, j)]] = c
            if any(s[:shift]):
                raise ValueError("element is not in S")
        return tuple(out)

    def _unit_inverse(self, u: Polynomial) -> tuple:
        inv = self._inverse_cache.get(u)
        if inv is None:
            img = self._box_of(u, 0)
            mat = self.box.left_matrix(img)
            sol, _ = linear_solve(mat, self.box.one, self.sc.field)
            if sol is None:
                raise ValueError(f"{u} is not a unit")
            inv = tuple(sol)
            self._inverse_cache[u] = inv
        return inv

    def rho(self, f) -> tuple:
        """Ring part: the class of f ∈ S in S/(x^e, y^d)."""
        sc = self.sc
        f = sc.lift(f)
        if sc.in_S(f) is not True:
            raise ValueError(f"{f} is not (certifiably) in S")
        P, e, u = sc.split(f)
        img = self._box_of(P, e)
        if not u.is_constant():
            img = self.box.mul(img, self._unit_inverse(u))
        elif u.constant_term() != sc.field.one:
            img = self.box.scale(sc.field.inv(u.constant_term()), img)
        return img

    def kappa(self, series: LaurentSeries) -> tuple:
        """Module part: the class of a lattice element in K/x^e K."""
        sc = self.sc
        if sc.v0 is None:
            return ()
        v = series.valuation()
        if not isinstance(v, AtLeast) and v < sc.v0:
            raise ValueError("series is not in K")
        return tuple(series.coefficient(sc.v0 + i) for i in range(self.e))

    def f_map(self, r) -> IdealizationElement:
        """r ↦ (r, D(r)) for a member r."""
        sc = self.sc
        r = sc.lift(r)
        verdict = sc.membership(r)
        if verdict.in_R != YES:
            raise ValueError(f"{r} is not a member (verdict {verdict.summary()})")
        ring_part = self.rho(r)
        dr = sc.derivative(r)
        if dr.is_zero() or sc.v0 is None:
            mod_part = self.module.zero()
        else:
            mod_part = self.kappa(sc.embed(dr))
        return IdealizationElement(ring_part, mod_part, self.ring)


# -- checks ---------------------------------------------------------------------


@dataclass
class CheckResult:
    passed: bool
    evidence: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.passed


def membership(sc: Scenario, f) -> MembershipVerdict:
    return sc.membership(f)


def _random_pool(sc: Scenario) -> List[LocalFraction]:
    pool = [sc.monomial(i, j) for i in range(3) for j in range(3)]
    Z, x = sc.var(sc.Z), sc.var(sc.x)
    pool += [Z, Z * Z / x, Z / x, (Z - x) / x]
    if sc.v0 is not None:
        pool += [sc.sigma(sc.v0 + t) for t in (-1, 0, 1)]
    return pool


def _random_combo(sc: Scenario, pool, rng: random.Random):
    k = rng.randint(1, 3)
    out = None
    for item in rng.sample(pool, k):
        c = sc.field.random(rng, 3)
        if sc.field.is_zero(c):
            c = sc.field.one
        term = item * c
        out = term if out is None else out + term
    return out


def ring_closure_check(sc: Scenario, samples=200, rng: random.Random = None) -> CheckResult:
    """Sums and products of member pairs are members.

    ``samples`` is either an explicit list of pairs or a number of random
    member pairs to draw; pairs containing a non-member are skipped.
    """
    rng = rng or random.Random(0)
    if isinstance(samples, int):
        pool = _random_pool(sc)
        target, pairs, skipped, tries = samples, [], 0, 0
        while len(pairs) < target and tries < 50 * target:
            tries += 1
            a, b = _random_combo(sc, pool, rng), _random_combo(sc, pool, rng)
            va, vb = sc.membership(a), sc.membership(b)
            if va.in_R == INDETERMINATE or vb.in_R == INDETERMINATE:
                raise PrecisionError(f"indeterminate verdict for a sampled element")
            if va.in_R == YES and vb.in_R == YES:
                pairs.append((a, b))
            else:
                skipped += 1
    else:
        pairs, skipped = [], 0
        for a, b in samples:
            a, b = sc.lift(a), sc.lift(b)
            va, vb = sc.membership(a), sc.membership(b)
            if INDETERMINATE in (va.in_R, vb.in_R):
                raise PrecisionError("indeterminate verdict among the samples")
            if va.in_R == YES and vb.in_R == YES:
                pairs.append((a, b))
            else:
                skipped += 1
    for a, b in pairs:
        for label, c in (("sum", a + b), ("product", a * b)):
            v = sc.membership(c)
            if v.in_R == INDETERMINATE:
                raise PrecisionError(f"indeterminate verdict for the {label} of {a} and {b}")
            if v.in_R != YES:
                return CheckResult(False, {"pairs_tested": len(pairs), "rejected_draws": skipped,
                                           "witness": [str(a), str(b)], "operation": label})
    return CheckResult(True, {"pairs_tested": len(pairs), "rejected_draws": skipped})


def alpha_iso_check(sc: Scenario, j_max: int, samples: Sequence = None) -> CheckResult:
    """α: S/R → K_C/K, s + R ↦ D(s) + K, is an isomorphism.

    Surjectivity: the cosets of x^(v0 - j), j = 1..j_max, are hit by
    sigma(v0 - j), which must lie in S.  Injectivity: every sampled s with
    D(s) ∈ K is a member.
    """
    if sc.v0 is None:
        return CheckResult(True, {"note": "K = K_C, both sides are zero"})
    if j_max >= sc.N:
        raise PrecisionError(f"j_max = {j_max} needs precision beyond {sc.N}")
    witnesses = []
    for j in range(1, j_max + 1):
        k = sc.v0 - j
        s = sc.sigma(k)
        if k < 0:
            gap = sc.embed_poly(s.num).valuation()
            gap_s = str(gap)
            # val(z - p_j) ≥ j certifies s ∈ S; a zero truncation certifies val ≥ N > j
            ok_gap = gap.bound >= -k if isinstance(gap, AtLeast) else gap >= -k
            if not ok_gap:
                return CheckResult(False, {"j": j, "reason": f"val(z - p_{-k}) = {gap} < {-k}"})
        else:
            gap_s = "n/a"
        if sc.in_S(s) is not True:
            return CheckResult(False, {"j": j, "reason": f"{s} not certified in S"})
        ds = sc.derivative(s)
        expected = sc.lift(Polynomial.constant(sc.field, sc.names, 1)) * sc.var(sc.x) ** k
        if not ds == expected:
            return CheckResult(False, {"j": j, "reason": f"D({s}) = {ds}, expected x^{k}"})
        if sc.membership(s).in_R != NO:
            return CheckResult(False, {"j": j, "reason": f"{s} should not be in R"})
        witnesses.append({"j": j, "s": str(s), "D": str(ds), "gap_valuation": gap_s})
    # injectivity on samples: D(s) ∈ K  ⇔  member, and distinct cosets stay distinct
    checked = 0
    pool = list(samples) if samples is not None else _random_pool(sc)
    for s in pool:
        s = sc.lift(s)
        if sc.in_S(s) is not True:
            continue
        df = sc.derivative(s)
        in_K = df.is_zero() or not isinstance(sc.embed(df).valuation(), AtLeast) and sc.embed(df).valuation() >= sc.v0
        v = sc.membership(s)
        if v.in_R == INDETERMINATE:
            continue
        if in_K != (v.in_R == YES):
            return CheckResult(False, {"reason": f"α-kernel mismatch at {s}"})
        checked += 1
    return CheckResult(True, {"witnesses": witnesses, "injectivity_samples": checked})


def f_map(sc: Scenario, r, m: int = 1) -> IdealizationElement:
    return IdealizationModel(sc, m).f_map(r)


def _c_exponent(sc: Scenario, c) -> int:
    c = sc.lift(c)
    if not c.is_polynomial() or len(c.num.terms) != 1:
        raise ValueError("c must be a power of x")
    (exps, coef), = c.num.terms.items()
    if exps[1] or exps[2] or exps[0] < 1:
        raise ValueError("c must be a positive power of x")
    return exps[0]


def analytic_iso_check(sc: Scenario, m: int = 1, c=None, rng: random.Random = None,
                       pairs: int = 40) -> CheckResult:
    """R/c^m R ≅ S/c^m S ⋆ K/c^m K via r ↦ (r, D(r)), checked at bounds.

    c defaults to x; c = x^k gives the x^(k m) model.
    """
    rng = rng or random.Random(0)
    e = m * (_c_exponent(sc, c) if c is not None else 1)
    model = sc.model(e)
    fam = sc.member_family(e) + sc.extra_members(e)
    images = [model.f_map(r) for r in fam]
    ring = model.ring
    # homomorphism on pairs
    idx_pairs = [(i, j) for i in range(len(fam)) for j in range(i, len(fam))]
    rng.shuffle(idx_pairs)
    tested = 0
    for i, j in idx_pairs[:pairs]:
        prod = fam[i] * fam[j]
        lhs = model.f_map(prod)
        rhs = images[i] * images[j]
        if lhs != rhs:
            return CheckResult(False, {"reason": "f is not multiplicative", "pair": [str(fam[i]), str(fam[j])]})
        lhs = model.f_map(fam[i] + fam[j])
        if lhs != images[i] + images[j]:
            return CheckResult(False, {"reason": "f is not additive", "pair": [str(fam[i]), str(fam[j])]})
        tested += 1
    one = model.f_map(1)
    if one != ring.one():
        return CheckResult(False, {"reason": "f(1) != (1, 0)"})
    vecs = [ring.to_vector(v) for v in images]
    n_model = ring.dim
    rk = rank(vecs, sc.field, n_model)
    # injectivity: kernel combinations are x^e-multiples of members
    cols = [[vecs[c][r] for c in range(len(vecs))] for r in range(n_model)]
    ker = kernel(cols, sc.field, len(vecs)) if cols else [tuple(1 if i == j else 0 for i in range(len(vecs))) for j in range(len(vecs))]
    xe = sc.var(sc.x) ** e
    for kv in ker:
        g = None
        for coef, r in zip(kv, fam):
            if coef:
                term = r * coef
                g = term if g is None else g + term
        if g is None or g.is_zero():
            continue
        if not sc.is_member(g / xe):
            return CheckResult(False, {"reason": "kernel element not in c^m R", "element": str(g)})
    ok = rk == n_model
    ev = {"exponent": e, "dim_R_model": rk, "dim_S_part": model.box.dim, "dim_K_part": model.module.dim,
          "model_dim": n_model, "family_size": len(fam), "kernel_dim": len(ker), "pairs_tested": tested}
    if not ok:
        ev["reason"] = "images do not span the idealization model"
    return CheckResult(ok, ev)


def one_case_check(sc: Scenario, I_gens: Sequence, m: int) -> CheckResult:
    """f(I)(S ⋆ K) = (IS) ⋆ K modulo x^m, for an ideal I of R containing x^m."""
    gens = [sc.lift(g) for g in I_gens]
    for g in gens:
        if not sc.is_member(g):
            raise ValueError(f"generator {g} is not a member")
    xm = sc.var(sc.x) ** m
    certificate = None
    for g in gens:
        if g.is_zero():
            continue
        try:
            if sc.is_member(xm / g):
                certificate = str(g)
                break
        except (ValueError, ZeroDivisionError):
            continue
    if certificate is None:
        raise BoundsError(f"c^{m} ∈ I not certified: no generator g with x^{m}/g ∈ R")
    model = sc.model(m)
    ring = model.ring
    lhs = ideal_span([model.f_map(g) for g in gens], ring)
    is_span = ideal_of(model.box, [model.rho(g) for g in gens])
    nb, nk = model.box.dim, model.module.dim
    vecs = [tuple(v) + (sc.field.zero,) * nk for v in is_span.basis]
    vecs += [(sc.field.zero,) * nb + tuple(1 if i == j else 0 for i in range(nk)) for j in range(nk)]
    rhs = Subspace(sc.field, ring.dim, vecs)
    ok = lhs == rhs
    return CheckResult(ok, {"m": m, "dim_lhs": lhs.dim, "dim_rhs": rhs.dim,
                            "c_power_certificate": f"x^{m}/({certificate}) ∈ R",
                            **({} if ok else {"reason": "f(I)(S⋆K) differs from (IS)⋆K in the model"})})


def _sample_elements(sc: Scenario, lo: int, hi: int) -> List[LocalFraction]:
    Z, x, y = sc.var(sc.Z), sc.var(sc.x), sc.var(sc.y)
    out = [sc.sigma(k) for k in range(lo, hi + 1)]
    out += [sc.monomial(1, 0), sc.monomial(0, 1), sc.monomial(2, 1), Z * Z, Z * Z / x, y * Z]
    out += [sc.sigma(lo) + y, sc.sigma(lo) * sc.sigma(hi), x * sc.sigma(lo)]
    return [s for s in out if sc.in_S(s) is True]


def intermediate_correspondence(sc: Scenario, v1: Optional[int]) -> CheckResult:
    """T = S ∩ D⁻¹(L) for L = {val ≥ v1}, and L recovered from D(T)."""
    if sc.v0 is not None and v1 is not None and v1 > sc.v0:
        raise ValueError(f"L must contain K: need v1 ≤ {sc.v0}")
    if sc.v0 is None and v1 is not None:
        raise ValueError("K = K_C: the only intermediate lattice is K_C")
    base = sc.v0 if sc.v0 is not None else 0
    lo = (v1 if v1 is not None else base) - 2
    samples = _sample_elements(sc, lo, base + 2)
    T, R_set, verdicts = [], [], {}
    for s in samples:
        vt = sc.membership(s, v1)
        vr = sc.membership(s)
        if INDETERMINATE in (vt.in_R, vr.in_R):
            raise PrecisionError(f"indeterminate verdict for {s}")
        verdicts[str(s)] = vt.in_R
        if vt.in_R == YES:
            T.append(s)
        if vr.in_R == YES:
            R_set.append(s)
    if any(str(r) not in {str(t) for t in T} for r in R_set):
        return CheckResult(False, {"reason": "R is not contained in T"})
    if v1 is None:
        ok = len(T) == len(samples)
        return CheckResult(ok, {"lattice": "K_C", "T_samples": len(T), "samples": len(samples)})
    vals = []
    for t in T:
        dt = sc.derivative(t)
        if dt.is_zero():
            continue
        v = sc.embed(dt).valuation()
        if not isinstance(v, AtLeast):
            vals.append(v)
    if not vals:
        return CheckResult(False, {"reason": "no nonzero derivative among T-samples"})
    recovered = min(vals)
    again = {str(s): sc.membership(s, recovered).in_R for s in samples}
    ok = recovered == v1 and again == verdicts
    ev = {"v1": v1, "recovered_threshold": recovered, "T_samples": len(T), "R_samples": len(R_set),
          "samples": len(samples)}
    if not ok:
        ev["reason"] = "round trip through D(T) changed the lattice or the verdicts"
    return CheckResult(ok, ev)


def kq_generators(sc: Scenario, a) -> dict:
    """dim_k K/aK and its minimal number of S-module generators (Nakayama)."""
    a = sc.lift(a)
    if sc.Z in (a.num.uses() | a.den.uses()):
        raise ValueError(f"{a} is not in A")
    if a.is_zero():
        raise ValueError("a must be nonzero")
    v = sc.embed(a).valuation()
    if isinstance(v, AtLeast):
        raise PrecisionError(f"valuation of {a} is {v}: indeterminate")
    if v < 0:
        raise ValueError(f"{a} is not in A")
    if sc.v0 is None or v == 0:
        return {"valuation": v, "dim": 0, "generators": 0}
    model = sc.model(v)
    M = model.module
    mM = ideal_times_module(M, maximal_ideal(model.box))
    return {"valuation": v, "dim": M.dim, "generators": M.dim - mM.dim}


def _max_ideal_samples(sc: Scenario) -> List[LocalFraction]:
    x, y, Z = sc.var(sc.x), sc.var(sc.y), sc.var(sc.Z)
    cands = [x, y, Z, Z * Z / x, x * y]
    if sc.v0 is not None:
        cands += [sc.sigma(sc.v0), sc.sigma(sc.v0 + 1), y * sc.sigma(sc.v0)]
    out = []
    for g in cands:
        if sc.in_S(g) is True and sc.membership(g).in_R == YES and sc.in_max_ideal(g):
            if all(not (g == h) for h in out):
                out.append(g)
    return out


def associated_prime_witness(sc: Scenario) -> CheckResult:
    """s ∈ S with D(s) ∈ x⁻¹K ∖ K, s ∉ R and s·M ⊆ R on sampled generators of M."""
    if sc.v0 is None:
        raise ValueError("K = K_C has no proper lattice: no witness exists")
    target = sc.v0 - 1
    y = sc.var(sc.y)
    base = sc.sigma(target)
    candidates = [base, base + y, base * (1 + y), base + sc.sigma(sc.v0)]
    gens = _max_ideal_samples(sc)
    tried = []
    for s in candidates:
        tried.append(str(s))
        if sc.in_S(s) is not True:
            continue
        ds = sc.derivative(s)
        if ds.is_zero():
            continue
        v = sc.embed(ds).valuation()
        if v != target:
            continue
        if sc.membership(s).in_R != NO:
            continue
        products = {}
        good = True
        for g in gens:
            vg = sc.membership(s * g)
            products[str(g)] = vg.summary()
            if vg.in_R != YES:
                good = False
                break
        if good:
            return CheckResult(True, {"witness": str(s), "D_valuation": v, "max_ideal_samples": products})
    return CheckResult(False, {"reason": "not found in family", "candidates": tried})


# -- quadratic, C-analytic, generators for the scenario ------------------------------


def _combine(items, coeffs):
    out = None
    for c, r in zip(coeffs, items):
        if c:
            t = r * c
            out = t if out is None else out + t
    return out


def scenario_quadratic(sc: Scenario, samples: Sequence = None) -> CheckResult:
    """st ∈ sR + tR + R for sampled s, t ∈ S.

    r, r' range over the k-span of a fixed member family; the linear
    conditions are that D(st - s r - t r') has no terms below x^v0.
    The resulting r'' is then confirmed a member by the oracle.
    """
    if samples is None:
        names = ["Z/x", "(Z - x)/x^2", "Z^2/x^2", "y*Z/x"]
        pool = [sc.element(n.replace("Z", sc.Z).replace("x", sc.x).replace("y", sc.y)) for n in names]
        samples = [(pool[i], pool[j]) for i in range(len(pool)) for j in range(i, len(pool))]
    if sc.v0 is None:
        return CheckResult(True, {"note": "R = S when K = K_C", "pairs": len(samples)})
    fam = [sc.monomial(i, j) for i in range(4) for j in range(2)]
    fam += [sc.sigma(sc.v0 + t) for t in range(4)]
    fam = [r for r in fam if sc.is_member(r)]
    solved = []
    for s, t in samples:
        s, t = sc.lift(s), sc.lift(t)
        for el in (s, t):
            if sc.in_S(el) is not True:
                raise ValueError(f"sample {el} is not in S")
        st = s * t
        target = sc.embed(sc.derivative(st))
        cols_series = [sc.embed(sc.derivative(s * r)) for r in fam] + [sc.embed(sc.derivative(t * r)) for r in fam]
        lo = min([target.start] + [c.start for c in cols_series])
        orders = list(range(lo, sc.v0))
        try:
            M = [[c.coefficient(k) for c in cols_series] for k in orders]
            rhs = [target.coefficient(k) for k in orders]
        except PrecisionError:
            raise PrecisionError("quadratic system needs more precision")
        if orders:
            sol, _ = linear_solve(M, rhs, sc.field)
        else:
            sol = [sc.field.zero] * len(cols_series)
        if sol is None:
            return CheckResult(False, {"witness": [str(s), str(t)], "reason": "no r, r' in the family"})
        r = _combine(fam, sol[: len(fam)]) or sc.lift(0)
        r2 = _combine(fam, sol[len(fam):]) or sc.lift(0)
        r3 = st - s * r - t * r2
        v = sc.membership(r3)
        if v.in_R == INDETERMINATE:
            raise PrecisionError(f"indeterminate membership of r'' = {r3}")
        if v.in_R != YES:
            return CheckResult(False, {"witness": [str(s), str(t)], "reason": f"r'' = {r3} is not a member"})
        solved.append({"s": str(s), "t": str(t), "r": str(r), "r'": str(r2), "r''": str(r3)})
    return CheckResult(True, {"pairs": len(solved), "solutions": solved})


def decompose(sc: Scenario, f, m: int) -> Tuple[LocalFraction, LocalFraction]:
    """f = a + x^m s with a ∈ A (no Z) and s ∈ S, both verified."""
    f = sc.lift(f)
    if sc.in_S(f) is not True:
        raise ValueError(f"{f} is not in S")
    P, e, u = sc.split(f)
    if e + m > sc.N:
        raise PrecisionError(f"decomposition mod x^{m} needs precision {e + m} > {sc.N}")
    fld = sc.field

    def truncate(poly: Polynomial, shift: int) -> Polynomial:
        out = Polynomial.zero(fld, sc.names)
        for j, Pj in poly.coefficients_in(sc.y).items():
            s = sc.embed_poly(Pj).coeffs
            q = sc.poly(s[shift: shift + m])
            out = out + q * Polynomial.var(fld, sc.names, sc.y, j)
        return out

    a_num = truncate(P, e)
    u_A = truncate(u, 0) if not u.is_constant() else u
    a = sc.lift(a_num) / sc.lift(u_A)
    s = (f - a) / sc.var(sc.x) ** m
    if sc.in_S(s) is not True:
        raise PrecisionError(f"decomposition of {f} mod x^{m} not certified at precision {sc.N}")
    return a, s


def c_exponent_in_ideal(sc: Scenario, gens: Sequence[LocalFraction], limit: int = None) -> int:
    """Least k with x^k ∈ (gens)S, certified by x^k/g ∈ S for a generator g."""
    limit = limit or sc.N - 1
    for k in range(0, limit + 1):
        xk = sc.var(sc.x) ** k
        for g in gens:
            if g.is_zero():
                continue
            try:
                if sc.in_S(xk / g) is True:
                    return k
            except (ValueError, ZeroDivisionError):
                continue
    raise BoundsError("ideal does not meet C within the precision")


def scenario_generator_bound(sc: Scenario, J_gens: Sequence, quasilocal: bool = False) -> CheckResult:
    """n generators of J ⊆ S containing a power of x give n+1 (or n) generators of J ∩ A."""
    gens = [sc.lift(g) for g in J_gens]
    for g in gens:
        if sc.in_S(g) is not True:
            raise ValueError(f"{g} is not in S")
    k = c_exponent_in_ideal(sc, gens)
    if k == 0:
        return CheckResult(True, {"note": "J = S", "generators": ["1"], "count": 1})
    E = 2 * k
    parts = [decompose(sc, g, E) for g in gens]
    a_list = [a for a, _ in parts]
    cE = sc.var(sc.x) ** E
    model = sc.model(E)
    J_span = ideal_of(model.box, [model.rho(g) for g in gens])
    # each a_i lies in A by construction (no Z); check a_i ∈ J in the x^k model
    small = sc.model(k)
    J_small = ideal_of(small.box, [small.rho(g) for g in gens])
    for a in a_list:
        if sc.Z in (a.num.uses() | a.den.uses()):
            return CheckResult(False, {"reason": f"{a} is not in A"})
        if not J_small.contains(small.rho(a)):
            return CheckResult(False, {"reason": f"{a} is not in J"})
    out = a_list + [cE]
    if ideal_of(model.box, [model.rho(g) for g in out]) != J_span:
        return CheckResult(False, {"reason": "outputs do not generate J ∩ A in the model"})
    dropped = False
    if quasilocal:
        if ideal_of(model.box, [model.rho(g) for g in a_list]) == J_span:
            out = a_list
            dropped = True
    bound = len(gens) if quasilocal else len(gens) + 1
    ok = len(out) <= bound
    return CheckResult(ok, {"generators": [str(g) for g in out], "count": len(out), "bound": bound,
                            "c_exponent": k, "model_exponent": E, "dropped_c2": dropped})


def scenario_contract_extend(sc: Scenario, gens: Sequence, side: str = "big") -> CheckResult:
    """Contraction/extension round trip for ideals meeting C, in the x^(2k) model."""
    gens = [sc.lift(g) for g in gens]
    if side == "small":
        for g in gens:
            if sc.Z in (g.num.uses() | g.den.uses()):
                raise ValueError(f"{g} is not in A")
    k = c_exponent_in_ideal(sc, gens)
    if k == 0:
        return CheckResult(True, {"note": "unit ideal"})
    E = 2 * k
    model = sc.model(E)
    span = ideal_of(model.box, [model.rho(g) for g in gens])
    if side == "big":
        contracted = [decompose(sc, g, E)[0] for g in gens] + [sc.var(sc.x) ** E]
        back = ideal_of(model.box, [model.rho(a) for a in contracted])
        ok = back == span
        return CheckResult(ok, {"contraction": [str(a) for a in contracted], "model_exponent": E,
                                "dim": span.dim})
    # I ⊆ A: IS ∩ A has the same image, A/x^E A → S/x^E S being bijective on the box
    ext = ideal_of(model.box, [model.rho(g) for g in gens])
    a_side = ideal_of(model.box, [model.box.from_polynomial(_poly_xy(sc, g, E)) for g in gens])
    ok = ext == a_side
    return CheckResult(ok, {"model_exponent": E, "dim": ext.dim})


def _poly_xy(sc: Scenario, a: LocalFraction, E: int) -> Polynomial:
    """Image of a ∈ A in k[x,y]/(x^E, y^d) by polynomial arithmetic alone."""
    names = (sc.x, sc.y)
    num = a.num.change_variables(names)
    den = a.den.change_variables(names)
    box = box_algebra(sc.field, names, (E, sc.d))
    inv, _ = linear_solve(box.left_matrix(box.from_polynomial(den)), box.one, sc.field)
    if inv is None:
        raise ValueError("denominator is not a unit")
    return box.to_polynomial(box.mul(box.from_polynomial(num), tuple(inv)))


def scenario_c_analytic(sc: Scenario, m: int = 1, samples: Sequence = None) -> CheckResult:
    """S = A + x^(m i) S and A ∩ x^(m i) S ⊆ x^(m i) A for i = 1..M."""
    if samples is None:
        samples = [sc.element(t.replace("Z", sc.Z).replace("x", sc.x).replace("y", sc.y))
                   for t in ("Z", "Z/x", "(Z - x)/x^2", "Z^2/x^2", "y*Z/x", "1/(1 + Z)", "y/(1 + Z + y)")]
        samples = [s for s in samples if sc.in_S(s) is True]
    a_samples = [sc.lift(sc.poly([0, 0, 1])), sc.lift(sc.poly([0, 1])) * sc.var(sc.y), sc.var(sc.y) + sc.var(sc.x) ** 3]
    certs = []
    for i in range(1, sc.max_exponent + 1):
        e = m * i
        for s in samples:
            a, rest = decompose(sc, s, e)
            certs.append({"exponent": e, "s": str(s), "a": str(a)})
        xe = sc.var(sc.x) ** e
        for a in a_samples:
            q = a / xe
            if sc.in_S(q) is True and not q.is_polynomial():
                return CheckResult(False, {"reason": f"{a} ∈ x^{e}S but not in x^{e}A"})
    return CheckResult(True, {"verified_up_to_exponent": sc.max_exponent, "m": m,
                              "decompositions": len(certs)})


def tgf_witnesses(sc: Scenario, samples: Sequence = None) -> CheckResult:
    """Weak TGF direction: s^p ∈ sS ∩ R for sampled s (characteristic p only)."""
    p = sc.field.characteristic
    if samples is None:
        samples = [sc.var(sc.Z), sc.element(f"{sc.Z}/{sc.x}"), sc.sigma(-1) if sc.v0 is not None else sc.var(sc.Z)]
    if p == 0:
        return CheckResult(False, {"note": "no Frobenius witness in characteristic 0", "status": "not witnessed"})
    found = []
    for s in samples:
        s = sc.lift(s)
        w = s ** p
        if w.is_zero() or sc.membership(w).in_R != YES:
            return CheckResult(False, {"reason": f"{s}^{p} is not a nonzero member"})
        found.append(str(w))
    return CheckResult(True, {"status": "witnessed on samples", "witnesses": found})


# -- global stable instance --------------------------------------------------------


@dataclass(frozen=True)
class GlobalStableSpec:
    field: CoefficientField
    var: str
    primes: Tuple[Polynomial, ...]
    ranks: Tuple[int, ...]

    def __post_init__(self):
        if not self.field.is_finite:
            raise ValueError("global stable instances need a finite coefficient field")
        if len(self.primes) != len(self.ranks):
            raise ValueError("one rank per prime")
        if len(self.primes) > 8:
            raise BoundsError("at most 8 primes at desk scale")
        monic = [p.monic() for p in self.primes]
        if len(set(monic)) != len(monic):
            raise ValueError("primes must be pairwise distinct")
        for r in self.ranks:
            if r < 0:
                raise ValueError("ranks must be nonnegative integers")


def is_irreducible(p: Polynomial) -> bool:
    """Brute-force irreducibility over a small prime field."""
    f = p.field
    n = p.degree()
    if n < 1:
        return False
    if n == 1:
        return True
    x = p.variables[0]
    for d in range(1, n // 2 + 1):
        for coeffs in itertools.product(list(f.elements()), repeat=d):
            q = Polynomial.var(f, p.variables, x, d)
            for i, c in enumerate(coeffs):
                q = q + Polynomial.var(f, p.variables, x, i).scale(c)
            if (p % q).is_zero():
                return False
    return True


def local_stable_model(field: CoefficientField, prime: Polynomial, rank_: int) -> IdealizationRing:
    """k[t]/(N^2) ⋆ (k[t]/N)^e on the basis t^i N^j."""
    N = prime.monic()
    deg = N.degree()
    var = N.variables[0]
    N2 = N * N
    basis = [Polynomial.var(field, N.variables, var, i) * (N ** j) for j in range(2) for i in range(deg)]
    labels = [f"t^{i}" + ("" if j == 0 else "*N") for j in range(2) for i in range(deg)]

    def coords(p: Polynomial) -> tuple:
        p = p % N2
        q, r = divmod(p, N)
        rc = r.coefficient_list() if not r.is_zero() else []
        qc = q.coefficient_list() if not q.is_zero() else []
        out = [field.zero] * (2 * deg)
        for i, c in enumerate(rc):
            out[i] = c
        for i, c in enumerate(qc):
            out[deg + i] = c
        return tuple(out)

    table = [[tuple((k, c) for k, c in enumerate(coords(a * b)) if c) for b in basis] for a in basis]
    alg = FiniteAlgebra(field, labels, table, coords(Polynomial.constant(field, N.variables, 1)))
    mlabels = [f"t^{i}*e{r + 1}" for r in range(rank_) for i in range(deg)]
    n = deg * rank_
    action = []
    for b in basis:
        mat = [[field.zero] * n for _ in range(n)]
        for r in range(rank_):
            for i in range(deg):
                img = (b * Polynomial.var(field, N.variables, var, i)) % N
                if img.is_zero():
                    continue
                for k, c in enumerate(img.coefficient_list()):
                    mat[r * deg + k][r * deg + i] = c
        action.append(mat)
    return IdealizationRing(alg, FiniteModule(alg, mlabels, action))


def global_stable_instance(spec: GlobalStableSpec) -> CheckResult:
    dims = []
    for N, e in zip(spec.primes, spec.ranks):
        if not is_irreducible(N):
            raise ValueError(f"{N} does not generate a maximal ideal")
        dims.append(embedding_dimension(local_stable_model(spec.field, N, e)))
    expected = [e + 1 for e in spec.ranks]
    return CheckResult(dims == expected, {"embedding_dimensions": dims, "expected": expected})
