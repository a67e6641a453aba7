"""Exact polynomial arithmetic over F2(t).

- ``FieldElem``: reduced fractions of dense F2[t] polynomials. The dense
  arithmetic is sympy's ``galoistools`` with p = 2 over ``ZZ``; polynomials are
  stored as tuples of 0/1 ints, highest degree first.
- ``MultiPoly``: sparse polynomials in edge variables x_0..x_n.
- ``buchberger`` / ``normal_form`` / ``standard_monomials`` / ``hilbert_series``:
  Groebner machinery under graded reverse lexicographic order with
  x_n > ... > x_1 > x_0.

Buchberger works fraction-free internally: coefficients stay in F2[t],
S-polynomials and reductions are cross-multiplied by gcd cofactors and the
F2[t]-content is removed. Only the final reduced basis is made monic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy as sp
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_div, gf_gcd, gf_mul, gf_strip


class DivideByZero(ZeroDivisionError):
    pass


class DegreeCapExceeded(RuntimeError):
    pass


class InfiniteDimensional(RuntimeError):
    pass


Poly = Tuple[int, ...]
Monomial = Tuple[int, ...]

_P = 2
P_ZERO: Poly = ()
P_ONE: Poly = (1,)


def _poly(f: Iterable[int]) -> Poly:
    return tuple(int(c) for c in gf_strip(list(f)))


def padd(f: Poly, g: Poly) -> Poly:
    if not f:
        return g
    if not g:
        return f
    return _poly(gf_add(list(f), list(g), _P, ZZ))


def pmul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return P_ZERO
    if f == P_ONE:
        return g
    if g == P_ONE:
        return f
    return _poly(gf_mul(list(f), list(g), _P, ZZ))


def pgcd(f: Poly, g: Poly) -> Poly:
    if not f:
        return g
    if not g:
        return f
    if f == P_ONE or g == P_ONE:
        return P_ONE
    return _poly(gf_gcd(list(f), list(g), _P, ZZ))


def pdivmod(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    if not g:
        raise DivideByZero("division by the zero polynomial")
    if g == P_ONE:
        return f, P_ZERO
    q, r = gf_div(list(f), list(g), _P, ZZ)
    return _poly(q), _poly(r)


def pexquo(f: Poly, g: Poly) -> Poly:
    q, r = pdivmod(f, g)
    if r:
        raise ArithmeticError(f"{format_poly(g)} does not divide {format_poly(f)}")
    return q


def t_power(k: int) -> Poly:
    return (1,) + (0,) * k


def format_poly(f: Poly) -> str:
    if not f:
        return "0"
    deg = len(f) - 1
    parts = []
    for i, c in enumerate(f):
        if not c:
            continue
        e = deg - i
        parts.append("1" if e == 0 else "t" if e == 1 else f"t^{e}")
    return "+".join(parts)


@dataclass(frozen=True)
class FieldElem:
    """Element of F2(t) as a reduced fraction num/den."""

    num: Poly = P_ZERO
    den: Poly = P_ONE

    @classmethod
    def of(cls, num: Iterable[int], den: Iterable[int] = P_ONE) -> "FieldElem":
        num, den = _poly(num), _poly(den)
        if not den:
            raise DivideByZero("zero denominator")
        if not num:
            return ZERO
        if den != P_ONE:
            g = pgcd(num, den)
            if g != P_ONE:
                num, den = pexquo(num, g), pexquo(den, g)
        return cls(num, den)

    @classmethod
    def t(cls, k: int = 1) -> "FieldElem":
        return cls(t_power(k), P_ONE) if k >= 0 else cls(P_ONE, t_power(-k))

    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def is_polynomial(self) -> bool:
        return self.den == P_ONE

    def __add__(self, other: "FieldElem") -> "FieldElem":
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            if self.den == P_ONE:
                return FieldElem(padd(self.num, other.num), P_ONE)
            return FieldElem.of(padd(self.num, other.num), self.den)
        return FieldElem.of(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    # characteristic 2
    __sub__ = __add__

    def __neg__(self) -> "FieldElem":
        return self

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        if not self.num or not other.num:
            return ZERO
        if self.den == P_ONE and other.den == P_ONE:
            return FieldElem(pmul(self.num, other.num), P_ONE)
        return FieldElem.of(pmul(self.num, other.num), pmul(self.den, other.den))

    def inverse(self) -> "FieldElem":
        if not self.num:
            raise DivideByZero("zero has no inverse in F2(t)")
        return FieldElem(self.den, self.num)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        if self.den == P_ONE:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


ZERO = FieldElem(P_ZERO, P_ONE)
ONE = FieldElem(P_ONE, P_ONE)


# ---------------------------------------------------------------------------
# Monomials and sparse polynomials
# ---------------------------------------------------------------------------


def grevlex_key(m: Monomial) -> Tuple[int, ...]:
    """Sort key: larger key means larger monomial (x_n > ... > x_0)."""
    return (sum(m),) + tuple(-e for e in m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def format_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) if parts else "1"


class MultiPoly:
    """Sparse polynomial in x_0..x_{nvars-1} with F2(t) coefficients.

    Treated as immutable once built.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Monomial, FieldElem]] = None):
        self.nvars = nvars
        self.terms: Dict[Monomial, FieldElem] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, c: FieldElem, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.constant(ONE, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: FieldElem = ONE) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, i: int, nvars: int, coeff: FieldElem = ONE) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff})

    @classmethod
    def product(cls, variables: Iterable[int], nvars: int, coeff: FieldElem = ONE) -> "MultiPoly":
        """coeff * prod x_i (repeats raise the power)."""
        e = [0] * nvars
        for i in variables:
            e[i] += 1
        return cls(nvars, {tuple(e): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly(self.nvars, out)

    __sub__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return self.scale(other)
        out: Dict[Monomial, FieldElem] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, ZERO) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly(self.nvars, out)

    def scale(self, c: FieldElem) -> "MultiPoly":
        if not c:
            return MultiPoly(self.nvars)
        return MultiPoly(self.nvars, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: FieldElem = ONE) -> "MultiPoly":
        return MultiPoly(self.nvars, {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grevlex_key)

    def leading_coeff(self) -> FieldElem:
        return self.terms[self.leading_monomial()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(self.leading_coeff().inverse())

    def sorted_terms(self) -> List[Tuple[Monomial, FieldElem]]:
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = format_monomial(m)
            if c == ONE:
                parts.append(mono)
                continue
            coeff = str(c)
            if not (c.is_polynomial and "+" not in coeff):
                coeff = f"({coeff})" if c.is_polynomial else coeff
            parts.append(coeff if mono == "1" else f"{coeff}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis sorted by leading monomial, largest first."""

    nvars: int
    polys: Tuple[MultiPoly, ...]
    _lms: Tuple[Monomial, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lms", tuple(p.leading_monomial() for p in self.polys))

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return self._lms

    @property
    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials)

    def contains(self, p: MultiPoly) -> bool:
        return normal_form(p, self).is_zero()

    def __len__(self) -> int:
        return len(self.polys)


# Internal fraction-free form: monomial -> F2[t] coefficient.
_FFPoly = Dict[Monomial, Poly]


def _ff_from(p: MultiPoly) -> _FFPoly:
    den = P_ONE
    for c in p.terms.values():
        if c.den != P_ONE:
            den = pexquo(pmul(den, c.den), pgcd(den, c.den))
    out = {m: (c.num if den == P_ONE else pexquo(pmul(c.num, den), c.den)) for m, c in p.terms.items()}
    return _ff_primitive(out)


def _ff_primitive(p: _FFPoly) -> _FFPoly:
    g = P_ZERO
    for c in p.values():
        g = pgcd(g, c)
        if g == P_ONE:
            return p
    if not g:
        return p
    return {m: pexquo(c, g) for m, c in p.items()}


def _ff_lm(p: _FFPoly) -> Monomial:
    return max(p, key=grevlex_key)


def _ff_axpy(acc: _FFPoly, scale: Poly, src: _FFPoly, shift: Monomial, skip: Optional[Monomial] = None) -> None:
    """acc += scale * x^shift * src, in place (char 2)."""
    for m, c in src.items():
        mm = mono_mul(m, shift)
        if mm == skip:
            continue
        v = padd(acc.get(mm, P_ZERO), pmul(scale, c))
        if v:
            acc[mm] = v
        else:
            acc.pop(mm, None)


def _ff_scale(p: _FFPoly, scale: Poly) -> _FFPoly:
    if scale == P_ONE:
        return p
    return {m: pmul(c, scale) for m, c in p.items()}


def _ff_reduce(p: _FFPoly, basis: List[_FFPoly], lms: List[Monomial]) -> _FFPoly:
    """Full fraction-free reduction; the result is primitive and equals p up to an F2[t] unit."""
    work = dict(p)
    rem: _FFPoly = {}
    while work:
        m = _ff_lm(work)
        c = work[m]
        idx = next((i for i, lm in enumerate(lms) if mono_divides(lm, m)), None)
        if idx is None:
            rem[m] = work.pop(m)
            continue
        g = basis[idx]
        a = g[lms[idx]]
        h = pgcd(a, c)
        fa, fc = pexquo(a, h), pexquo(c, h)
        if fa != P_ONE:
            work = _ff_scale(work, fa)
            rem = _ff_scale(rem, fa)
        work.pop(m)
        _ff_axpy(work, fc, g, mono_div(m, lms[idx]), skip=m)
    return _ff_primitive(rem)


def _ff_spoly(f: _FFPoly, lf: Monomial, g: _FFPoly, lg: Monomial) -> _FFPoly:
    lcm = mono_lcm(lf, lg)
    a, c = f[lf], g[lg]
    h = pgcd(a, c)
    out: _FFPoly = {}
    _ff_axpy(out, pexquo(c, h), f, mono_div(lcm, lf), skip=lcm)
    _ff_axpy(out, pexquo(a, h), g, mono_div(lcm, lg), skip=lcm)
    return out


def _infer_nvars(gens: Sequence[MultiPoly], nvars: Optional[int]) -> int:
    sizes = {g.nvars for g in gens}
    if nvars is not None:
        sizes.add(nvars)
    if len(sizes) > 1:
        raise ValueError(f"generators live in rings of different sizes: {sorted(sizes)}")
    if not sizes:
        raise ValueError("nvars is required for an empty generator list")
    return sizes.pop()


def _unit_basis(nvars: int) -> GroebnerBasis:
    return GroebnerBasis(nvars, (MultiPoly.one(nvars),))


def buchberger(
    gens: Sequence[MultiPoly],
    nvars: Optional[int] = None,
    degree_cap: Optional[int] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed lowest-lcm-degree first, with the product and chain
    criteria. Raises DegreeCapExceeded when a new basis element has total
    degree above ``degree_cap``.
    """
    nvars = _infer_nvars(gens, nvars)
    basis: List[_FFPoly] = []
    lms: List[Monomial] = []
    pending: set = set()
    queue: List[Tuple[Tuple[int, ...], int, int]] = []

    def _add(r: _FFPoly) -> bool:
        lm = _ff_lm(r)
        if sum(lm) == 0:
            return True
        if degree_cap is not None and sum(lm) > degree_cap:
            raise DegreeCapExceeded(f"basis element of degree {sum(lm)} exceeds cap {degree_cap}")
        k = len(basis)
        basis.append(r)
        lms.append(lm)
        for i in range(k):
            lcm = mono_lcm(lms[i], lm)
            pending.add((i, k))
            heapq.heappush(queue, ((sum(lcm),) + tuple(-e for e in lcm), i, k))
        return False

    for g in sorted((g for g in gens if g), key=lambda p: grevlex_key(p.leading_monomial())):
        r = _ff_reduce(_ff_from(g), basis, lms)
        if r and _add(r):
            return _unit_basis(nvars)

    while queue:
        _, i, j = heapq.heappop(queue)
        pending.discard((i, j))
        li, lj = lms[i], lms[j]
        lcm = mono_lcm(li, lj)
        if lcm == mono_mul(li, lj):
            continue
        if any(
            k not in (i, j)
            and mono_divides(lms[k], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            continue
        r = _ff_reduce(_ff_spoly(basis[i], li, basis[j], lj), basis, lms)
        if r and _add(r):
            return _unit_basis(nvars)

    return _reduced_basis(nvars, basis, lms)


def _reduced_basis(nvars: int, basis: List[_FFPoly], lms: List[Monomial]) -> GroebnerBasis:
    keep: List[int] = []
    for i, lm in enumerate(lms):
        if any(j != i and mono_divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(lms))):
            continue
        keep.append(i)
    polys = [
        MultiPoly(nvars, {m: FieldElem(c, P_ONE) for m, c in basis[i].items()}).monic() for i in keep
    ]
    for idx in range(len(polys)):
        others = GroebnerBasis(nvars, tuple(p for j, p in enumerate(polys) if j != idx))
        polys[idx] = normal_form(polys[idx], others).monic()
    polys.sort(key=lambda p: grevlex_key(p.leading_monomial()), reverse=True)
    return GroebnerBasis(nvars, tuple(polys))


def normal_form(p: MultiPoly, G: GroebnerBasis) -> MultiPoly:
    """Remainder of ``p`` on full division by the monic basis ``G``."""
    if G.is_unit:
        return MultiPoly(p.nvars)
    lms = G.leading_monomials
    work = dict(p.terms)
    rem: Dict[Monomial, FieldElem] = {}
    while work:
        m = max(work, key=grevlex_key)
        c = work.pop(m)
        idx = next((i for i, lm in enumerate(lms) if mono_divides(lm, m)), None)
        if idx is None:
            rem[m] = c
            continue
        shift = mono_div(m, lms[idx])
        for gm, gc in G.polys[idx].terms.items():
            if gm == lms[idx]:
                continue
            mm = mono_mul(gm, shift)
            v = work.get(mm, ZERO) + c * gc
            if v:
                work[mm] = v
            else:
                work.pop(mm, None)
    return MultiPoly(p.nvars, rem)


def ideal_equal(
    A: Sequence[MultiPoly],
    B: Sequence[MultiPoly],
    extra: Sequence[MultiPoly] = (),
    nvars: Optional[int] = None,
    degree_cap: Optional[int] = None,
) -> bool:
    """Whether A + extra and B + extra generate the same ideal."""
    nvars = _infer_nvars(list(A) + list(B) + list(extra), nvars)
    ga = buchberger(list(A) + list(extra), nvars=nvars, degree_cap=degree_cap)
    gb = buchberger(list(B) + list(extra), nvars=nvars, degree_cap=degree_cap)
    return all(gb.contains(a) for a in A) and all(ga.contains(b) for b in B)


def is_finite_dimensional(G: GroebnerBasis) -> bool:
    if G.is_unit:
        return True
    lms = G.leading_monomials
    return all(any(lm[i] > 0 and sum(lm) == lm[i] for lm in lms) for i in range(G.nvars))


def standard_monomials(G: GroebnerBasis, grade_cap: Optional[int] = None) -> List[Monomial]:
    """Monomials outside the leading-term ideal, by ascending degree then grevlex."""
    if G.is_unit:
        return []
    if grade_cap is None and not is_finite_dimensional(G):
        raise InfiniteDimensional("quotient has unbounded standard monomials; pass grade_cap")
    lms = G.leading_monomials
    out: List[Monomial] = []
    level = {(0,) * G.nvars}
    deg = 0
    while level and (grade_cap is None or deg <= grade_cap):
        out.extend(sorted(level, key=grevlex_key))
        nxt = set()
        for m in level:
            for i in range(G.nvars):
                mm = m[:i] + (m[i] + 1,) + m[i + 1:]
                if not any(mono_divides(lm, mm) for lm in lms):
                    nxt.add(mm)
        level = nxt
        deg += 1
    return out


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(q) / (1 - q)^power, counting standard monomials by x-degree."""

    numerator: Tuple[int, ...]  # coefficient of q^k at index k
    power: int

    def reduced(self) -> "HilbertSeries":
        num, power = list(self.numerator), self.power
        while power and num and sum(num) == 0:
            # synthetic division by (1 - q)
            quo, acc = [], 0
            for c in num[:-1]:
                acc += c
                quo.append(acc)
            num, power = _trim(quo), power - 1
        return HilbertSeries(tuple(num), power)

    def coefficients(self, up_to: int) -> List[int]:
        out = []
        for d in range(up_to + 1):
            if self.power == 0:
                out.append(self.numerator[d] if d < len(self.numerator) else 0)
                continue
            out.append(
                sum(c * comb(d - k + self.power - 1, self.power - 1) for k, c in enumerate(self.numerator) if k <= d)
            )
        return out

    @property
    def dimension(self) -> Optional[int]:
        r = self.reduced()
        if not r.numerator:
            return 0
        return sum(r.numerator) if r.power == 0 else None

    def as_expr(self, q: Optional[sp.Symbol] = None) -> sp.Expr:
        q = q or sp.Symbol("q")
        num = sum(c * q ** k for k, c in enumerate(self.numerator))
        return num / (1 - q) ** self.power

    def __str__(self) -> str:
        r = self.reduced()
        return str(r.as_expr())


def _trim(num: List[int]) -> List[int]:
    while num and num[-1] == 0:
        num.pop()
    return num


def _minimalize(gens: Iterable[Monomial]) -> List[Monomial]:
    gens = sorted(set(gens), key=sum)
    out: List[Monomial] = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return out


def _poly_sub(a: Dict[int, int], b: Dict[int, int], shift: int) -> Dict[int, int]:
    out = dict(a)
    for k, c in b.items():
        out[k + shift] = out.get(k + shift, 0) - c
    return {k: c for k, c in out.items() if c}


def _hilbert_numerator(gens: List[Monomial]) -> Dict[int, int]:
    gens = _minimalize(gens)
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}
    # pairwise coprime generators: product of (1 - q^deg)
    support = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    if all(support[i].isdisjoint(support[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))):
        out = {0: 1}
        for g in gens:
            out = _poly_sub(out, out, sum(g))
        return out
    last, rest = gens[-1], gens[:-1]
    colon = [mono_div(mono_lcm(g, last), last) for g in rest]
    return _poly_sub(_hilbert_numerator(rest), _hilbert_numerator(colon), sum(last))


def hilbert_series(G: GroebnerBasis) -> HilbertSeries:
    """Hilbert series of the quotient by the leading-term ideal of ``G``."""
    if G.is_unit:
        return HilbertSeries((), G.nvars)
    num = _hilbert_numerator(list(G.leading_monomials))
    top = max(num, default=-1)
    return HilbertSeries(tuple(num.get(k, 0) for k in range(top + 1)), G.nvars)
