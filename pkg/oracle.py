"""Alexander polynomial from the reduced Burau representation.

Independent of the cube machinery; used to check Euler characteristics.
Integer arithmetic throughout (sympy), so signs are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import sympy as sp

from braid import BraidWord

q = sp.Symbol("q")


@dataclass(frozen=True)
class IntLaurentPoly:
    terms: Tuple[Tuple[int, int], ...] = ()  # (exponent, coefficient), ascending, no zeros

    @classmethod
    def from_dict(cls, coeffs: Dict[int, int]) -> "IntLaurentPoly":
        return cls(tuple(sorted((int(e), int(c)) for e, c in coeffs.items() if c)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "IntLaurentPoly":
        out: Dict[int, int] = {}
        for e, c in pairs:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls.from_dict(out)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __neg__(self) -> "IntLaurentPoly":
        return IntLaurentPoly(tuple((e, -c) for e, c in self.terms))

    def shift(self, k: int) -> "IntLaurentPoly":
        return IntLaurentPoly(tuple((e + k, c) for e, c in self.terms))

    def doubled(self) -> "IntLaurentPoly":
        """Same polynomial in q^(1/2): every exponent doubled."""
        return IntLaurentPoly(tuple((2 * e, c) for e, c in self.terms))

    def value_at_one(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def min_exp(self) -> int:
        return self.terms[0][0]

    @property
    def max_exp(self) -> int:
        return self.terms[-1][0]

    def is_symmetric(self) -> bool:
        """Symmetric under q <-> 1/q up to a unit."""
        if not self.terms:
            return True
        d = self.as_dict()
        lo, hi = self.min_exp, self.max_exp
        return all(d.get(lo + k, 0) == d.get(hi - k, 0) for k in range(hi - lo + 1))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "" if e == 0 else "q" if e == 1 else f"q^{e}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)} {mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def equal_up_to_unit(p: IntLaurentPoly, r: IntLaurentPoly) -> bool:
    """True iff p = ±q^k r for some integer k."""
    if p.is_zero() or r.is_zero():
        return p.is_zero() and r.is_zero()
    if len(p.terms) != len(r.terms):
        return False
    aligned = r.shift(p.min_exp - r.min_exp)
    return p == aligned or p == -aligned


def burau_matrix(generator: int, strands: int) -> sp.Matrix:
    """Reduced Burau matrix of sigma_i (i >= 1), or its inverse for -i."""
    n = strands - 1
    i = abs(generator)
    M = sp.eye(n)
    r = i - 1
    M[r, r] = -q
    if r - 1 >= 0:
        M[r, r - 1] = q
    if r + 1 < n:
        M[r, r + 1] = 1
    return M if generator > 0 else M.inv()


def burau_alexander(w: BraidWord) -> IntLaurentPoly:
    """Symmetrized Alexander polynomial with value 1 at q = 1."""
    n = w.strands
    rho = sp.eye(n - 1)
    for x in w.letters:
        rho = rho * burau_matrix(x, n)
    rho = rho.applyfunc(sp.cancel)
    det = sp.cancel((sp.eye(n - 1) - rho).det(method="berkowitz"))
    delta = sp.cancel(det * (1 - q) / (1 - q ** n))
    num, den = sp.fraction(sp.together(delta))
    num_poly, den_poly = sp.Poly(num, q), sp.Poly(den, q)
    if len(den_poly.terms()) != 1:
        raise ArithmeticError(f"Burau quotient for {w} is not a Laurent polynomial: {delta}")
    (den_exp,), den_coeff = den_poly.terms()[0]
    coeffs: Dict[int, int] = {}
    for (e,), c in num_poly.terms():
        value = sp.Rational(c, den_coeff)
        if value.q != 1:
            raise ArithmeticError(f"non-integer Alexander coefficient {value} for {w}")
        coeffs[e - den_exp] = int(value)
    poly = IntLaurentPoly.from_dict(coeffs)
    span = poly.min_exp + poly.max_exp
    if span % 2:
        raise ArithmeticError(f"Alexander polynomial of {w} has no symmetric normalisation: {poly}")
    poly = poly.shift(-span // 2)
    return -poly if poly.value_at_one() < 0 else poly
