"""Standard bases in the local ring at the origin, for polynomial generators.

Local orders make 1 the largest monomial, so ordinary division loops need
not terminate; the weak normal form here follows Mora's tangent-cone
algorithm: when a reduction would raise the ecart, the current working
polynomial itself joins the reducer set, which folds a unit multiplier
into the division and restores termination.

Every division is certified. A basis element b_i comes with a row
(denominator_i, coefficients) satisfying

    denominator_i * b_i == sum_j coefficients[j] * generators[j]

exactly, with denominator_i(0) != 0, and membership witnesses have the
same shape. Witness identities are re-verified before being returned.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from . import _groebner
from .errors import DegreeCapExceededError
from .poly import (
    Monomial,
    Polynomial,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)

INFINITE = float("inf")

DEFAULT_DEGREE_CAP = 64


@dataclass(frozen=True)
class LocalOrder:
    """A monomial order in which 1 is the largest monomial."""

    kind: str  # "negdegrevlex" | "negdeglex"
    nvars: int

    def __post_init__(self):
        if self.kind not in ("negdegrevlex", "negdeglex"):
            raise ValueError(f"unknown local order {self.kind!r}")

    def key(self, mono: Monomial):
        """Sort key: larger key = larger monomial (so 1 is maximal)."""
        if self.kind == "negdegrevlex":
            return (-mono_degree(mono), tuple(-e for e in reversed(mono)))
        return (-mono_degree(mono), mono)

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def leading_monomial(self, p: Polynomial) -> Monomial:
        return max(p.terms, key=self.key)

    def sort_descending(self, monos):
        return sorted(monos, key=self.key, reverse=True)


def negdegrevlex(nvars: int) -> LocalOrder:
    return LocalOrder("negdegrevlex", nvars)


def negdeglex(nvars: int) -> LocalOrder:
    return LocalOrder("negdeglex", nvars)


def _ecart(p: Polynomial, lm: Monomial) -> int:
    return p.total_degree() - mono_degree(lm)


class _Reducer:
    """Entry of the Mora reducer set T with its division certificate."""

    __slots__ = ("poly", "lm", "lc", "ecart", "gen_index", "den", "vec")

    def __init__(self, poly, lm, lc, ecart, gen_index=None, den=None, vec=None):
        self.poly = poly
        self.lm = lm
        self.lc = lc
        self.ecart = ecart
        self.gen_index = gen_index  # index into the fixed reducer list, or None
        self.den = den  # for intermediates: den*p = sum(vec_i R_i) + poly
        self.vec = vec


def _mora_weak_nf(p: Polynomial, reducers, order: LocalOrder):
    """Weak normal form with certificate.

    Returns (h, den, vec) with den*p == sum_i vec[i]*reducers[i] + h exactly,
    den(0) != 0, and the leading monomial of h (if any) not divisible by any
    reducer leading monomial.
    """
    n = p.nvars
    zero = Polynomial.zero(n)
    T = []
    for i, g in enumerate(reducers):
        lm = order.leading_monomial(g)
        T.append(_Reducer(g, lm, g.terms[lm], _ecart(g, lm), gen_index=i))
    h = p
    den = Polynomial.one(n)
    vec = [zero] * len(reducers)
    while not h.is_zero:
        lm_h = order.leading_monomial(h)
        candidates = [t for t in T if mono_divides(t.lm, lm_h)]
        if not candidates:
            break
        g = min(candidates, key=lambda t: t.ecart)
        e_h = _ecart(h, lm_h)
        if g.ecart > e_h:
            T.append(
                _Reducer(h, lm_h, h.terms[lm_h], e_h, den=den, vec=list(vec))
            )
        c = h.terms[lm_h] / g.lc
        m = mono_div(lm_h, g.lm)
        h = h - g.poly.mul_term(m, c)
        if g.gen_index is not None:
            j = g.gen_index
            vec[j] = vec[j] + Polynomial.term(n, m, c)
        else:
            den = den - g.den.mul_term(m, c)
            vec = [v - gv.mul_term(m, c) for v, gv in zip(vec, g.vec)]
    if den.constant_term == 0:
        raise AssertionError("Mora certificate lost its unit denominator")
    return h, den, vec


def _combine_units(dens):
    """Product of unit polynomials together with the partial cofactors.

    Returns (product, cofactors) with cofactors[i] = product of all dens
    except dens[i].
    """
    n = dens[0].nvars if dens else 0
    total = Polynomial.one(n)
    for d in dens:
        total = total * d
    cof = []
    for i in range(len(dens)):
        c = Polynomial.one(n)
        for j, d in enumerate(dens):
            if j != i:
                c = c * d
        cof.append(c)
    return total, cof


@dataclass(frozen=True)
class StandardBasis:
    """Standard basis of a localized polynomial ideal, with lift witnesses.

    lift[i] = (denominator, coefficients) certifies
    denominator * basis[i] == sum_j coefficients[j] * generators[j].
    """

    order: LocalOrder
    generators: tuple
    basis: tuple
    lift: tuple

    @property
    def leading_monomials(self):
        return tuple(self.order.leading_monomial(b) for b in self.basis)


@dataclass(frozen=True)
class Staircase:
    """Monomials outside the leading ideal of a standard basis."""

    leading_monomials: tuple
    basis_monomials: "tuple | None"  # None when infinite
    finite: bool

    @property
    def dimension(self):
        return len(self.basis_monomials) if self.finite else INFINITE


@dataclass(frozen=True)
class MembershipWitness:
    """denominator * p == sum_j coefficients[j] * generators[j], unit denominator."""

    denominator: Polynomial
    coefficients: tuple


def standard_basis(gens, order: "LocalOrder | None" = None,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> StandardBasis:
    """Complete `gens` to a standard basis with Mora normal forms.

    Deterministic for a fixed input and order. Raises DegreeCapExceededError
    if completion produces a leading monomial beyond `degree_cap`.
    """
    gens = tuple(gens)
    nonzero = [(j, g) for j, g in enumerate(gens) if not g.is_zero]
    if not nonzero:
        raise ValueError("generators must not all be zero")
    n = nonzero[0][1].nvars
    if order is None:
        order = negdegrevlex(n)
    zero = Polynomial.zero(n)
    one = Polynomial.one(n)

    G = []  # monic basis candidates
    lms = []
    certs = []  # (den, coeff list over gens)
    for j, g in nonzero:
        lm = order.leading_monomial(g)
        lc = g.terms[lm]
        coeffs = [zero] * len(gens)
        coeffs[j] = Polynomial.constant(n, 1 / lc)
        G.append(g.scale(1 / lc))
        lms.append(lm)
        certs.append((one, coeffs))

    heap = []
    for i in range(len(G)):
        for j in range(i):
            lcm = mono_lcm(lms[i], lms[j])
            heapq.heappush(heap, (mono_degree(lcm), j, i))
    while heap:
        _, i, j = heapq.heappop(heap)
        lcm = mono_lcm(lms[i], lms[j])
        if lcm == mono_mul(lms[i], lms[j]):
            continue  # product criterion
        mi, mj = mono_div(lcm, lms[i]), mono_div(lcm, lms[j])
        s = G[i].mul_term(mi, 1) - G[j].mul_term(mj, 1)
        if s.is_zero:
            continue
        h, den, vec = _mora_weak_nf(s, G, order)
        if h.is_zero:
            continue
        # h = den*s - sum_k vec[k]*G[k]; fold s = x^mi G[i] - x^mj G[j]
        u = [-v for v in vec]
        u[i] = u[i] + den.mul_term(mi, 1)
        u[j] = u[j] - den.mul_term(mj, 1)
        support = [k for k, uk in enumerate(u) if not uk.is_zero]
        total, cof = _combine_units([certs[k][0] for k in support])
        coeffs = [zero] * len(gens)
        for pos, k in enumerate(support):
            factor = u[k] * cof[pos]
            for jj, w in enumerate(certs[k][1]):
                if not w.is_zero:
                    coeffs[jj] = coeffs[jj] + factor * w
        lm = order.leading_monomial(h)
        if mono_degree(lm) > degree_cap:
            raise DegreeCapExceededError(
                f"standard-basis completion passed degree cap {degree_cap}; "
                "raise the cap if the ideal is expected to be this deep"
            )
        lc = h.terms[lm]
        G.append(h.scale(1 / lc))
        lms.append(lm)
        certs.append((total, [c.scale(1 / lc) for c in coeffs]))
        k = len(G) - 1
        for t in range(k):
            heapq.heappush(
                heap, (mono_degree(mono_lcm(lms[t], lm)), t, k)
            )

    # minimal basis: drop elements with divisible leading monomials
    keep = []
    for i, lm in enumerate(lms):
        dominated = False
        for j, other in enumerate(lms):
            if j != i and mono_divides(other, lm) and (other != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    basis = tuple(G[i] for i in keep)
    lift = tuple((certs[i][0], tuple(certs[i][1])) for i in keep)
    return StandardBasis(order=order, generators=gens, basis=basis, lift=lift)


def staircase(sb: StandardBasis) -> Staircase:
    lms = sb.leading_monomials
    nvars = sb.basis[0].nvars
    monos = _groebner.staircase_monomials(lms, nvars)
    if monos is None:
        return Staircase(lms, None, False)
    ordered = tuple(sb.order.sort_descending(monos))
    return Staircase(lms, ordered, True)


def quotient_dimension(gens, order: "LocalOrder | None" = None,
                       degree_cap: int = DEFAULT_DEGREE_CAP):
    """Number of staircase monomials, or INFINITE."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return INFINITE
    sb = standard_basis(gens, order, degree_cap)
    st = staircase(sb)
    return len(st.basis_monomials) if st.finite else INFINITE


def _witness_over_generators(sb: StandardBasis, den, vec):
    """Rewrite den*p = sum vec_i basis_i into a witness over sb.generators."""
    n = den.nvars
    support = [i for i, v in enumerate(vec) if not v.is_zero]
    total, cof = _combine_units([sb.lift[i][0] for i in support])
    coeffs = [Polynomial.zero(n)] * len(sb.generators)
    for pos, i in enumerate(support):
        factor = vec[i] * cof[pos]
        for j, w in enumerate(sb.lift[i][1]):
            if not w.is_zero:
                coeffs[j] = coeffs[j] + factor * w
    return MembershipWitness(denominator=den * total, coefficients=tuple(coeffs))


def ideal_membership(p: Polynomial, gens, order: "LocalOrder | None" = None):
    """Decide p in (gens) localized at the origin; exact witness when true.

    Returns (bool, MembershipWitness | None). The witness identity
    denominator*p == sum coeff_j*gen_j is re-verified before returning.
    """
    gens = tuple(gens)
    if p.is_zero:
        n = p.nvars
        return True, MembershipWitness(
            Polynomial.one(n), tuple(Polynomial.zero(n) for _ in gens)
        )
    sb = standard_basis(gens, order)
    h, den, vec = _mora_weak_nf(p, list(sb.basis), sb.order)
    if not h.is_zero:
        return False, None
    witness = _witness_over_generators(sb, den, vec)
    lhs = witness.denominator * p
    rhs = Polynomial.zero(p.nvars)
    for c, g in zip(witness.coefficients, gens):
        rhs = rhs + c * g
    if lhs != rhs or witness.denominator.constant_term == 0:
        raise AssertionError("membership witness failed re-verification")
    return True, witness


def normal_form(p: Polynomial, sb: StandardBasis) -> Polynomial:
    """Remainder with no term divisible by a basis leading monomial.

    For finite-dimensional quotients this is the canonical staircase
    representative of the class of p in the localized quotient; it is 0
    exactly when p lies in the localized ideal.
    """
    st = staircase(sb)
    if st.finite:
        canon = _canonical_for(sb, st)
        coords = canon.coordinates(p)
        out = Polynomial.zero(p.nvars)
        for c, m in zip(coords, st.basis_monomials):
            if c:
                out = out + Polynomial.term(p.nvars, m, c)
        return out
    # positive-dimensional: Mora weak NF, then peel staircase leading terms
    result = Polynomial.zero(p.nvars)
    h = p
    while not h.is_zero:
        h, _, _ = _mora_weak_nf(h, list(sb.basis), sb.order)
        if h.is_zero:
            break
        lm = sb.order.leading_monomial(h)
        lt = Polynomial.term(p.nvars, lm, h.terms[lm])
        result = result + lt
        h = h - lt
    return result


class CanonicalQuotient:
    """Exact coordinates in a finite-dimensional localized quotient.

    The localized quotient equals the plain quotient by I + m^(delta+1)
    (delta = max staircase degree): that ideal is already local-artinian,
    so ordinary global-order division gives canonical linear algebra.
    Coordinates are expressed in the local staircase monomial basis.
    """

    def __init__(self, generators, staircase_monomials_desc, nvars):
        from . import _linalg

        self.nvars = nvars
        self.monomials = tuple(staircase_monomials_desc)
        d = len(self.monomials)
        delta = max((mono_degree(m) for m in self.monomials), default=0)
        bound = [
            Polynomial.term(nvars, m, 1)
            for m in monomials_of_degree(nvars, delta + 1)
        ]
        self.gb = _groebner.buchberger(list(generators) + bound)
        self.gb_lms = [_groebner.leading(g)[0] for g in self.gb]
        global_stairs = _groebner.staircase_monomials(self.gb_lms, nvars)
        if global_stairs is None or len(global_stairs) != d:
            raise AssertionError(
                "bounded global quotient disagrees with the local staircase"
            )
        self._gidx = {m: i for i, m in enumerate(sorted(global_stairs))}
        self._gmonos = sorted(global_stairs)
        self._mono_cache = {}
        cols = [self._global_coords_mono(m) for m in self.monomials]
        M = [[cols[j][i] for j in range(d)] for i in range(d)]
        self._to_local = _linalg.inverse(M)
        self._mono_cache = {}

    def _global_coords(self, p: Polynomial):
        r = _groebner.divide(p, self.gb, self.gb_lms)
        v = [Fraction(0)] * len(self._gmonos)
        for m, c in r.terms.items():
            v[self._gidx[m]] = c
        return v

    def _global_coords_mono(self, m):
        if m not in self._mono_cache:
            self._mono_cache[m] = self._global_coords(
                Polynomial.term(self.nvars, m, 1)
            )
        return self._mono_cache[m]

    def coordinates(self, p: Polynomial):
        """Coordinates of the class of p in the local staircase basis."""
        from . import _linalg

        return _linalg.mat_vec(self._to_local, self._global_coords(p))


_CANONICAL_CACHE: "dict[StandardBasis, CanonicalQuotient]" = {}


def _canonical_for(sb: StandardBasis, st: Staircase) -> CanonicalQuotient:
    canon = _CANONICAL_CACHE.get(sb)
    if canon is None:
        canon = CanonicalQuotient(
            list(sb.generators), st.basis_monomials, sb.basis[0].nvars
        )
        _CANONICAL_CACHE[sb] = canon
    return canon
