"""Exact Laurent polynomials in the formal rank variable N.

Coefficients are rationals; exponents may be negative.  Used as the value
ring of the universal gl/sl/so weight systems.
"""

from __future__ import annotations

from fractions import Fraction


class LaurentPoly:
    """Immutable Laurent polynomial in one variable over Q.

    Stored as a dict exponent -> nonzero Fraction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        d = {}
        if coeffs:
            for e, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                c = Fraction(c)
                if c:
                    d[int(e)] = d.get(int(e), Fraction(0)) + c
                    if not d[int(e)]:
                        del d[int(e)]
        self.coeffs = d

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls({0: c} if c else {})

    @classmethod
    def var(cls, exponent=1):
        return cls({exponent: Fraction(1)})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        d = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = d.get(e, Fraction(0)) + c
            if s:
                d[e] = s
            elif e in d:
                del d[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            out = LaurentPoly.__new__(LaurentPoly)
            out.coeffs = {e: v * c for e, v in self.coeffs.items()} if c else {}
            return out
        d = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = d.get(e, Fraction(0)) + c1 * c2
                if s:
                    d[e] = s
                elif e in d:
                    del d[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = d
        return out

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k):
        """Multiply by N^k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e + k: c for e, c in self.coeffs.items()}
        return out

    def divexact(self, other):
        """Exact division; raises ValueError on a nonzero remainder."""
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError("division by zero polynomial")
            return self * (1 / c)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        # reduce to ordinary polynomial division by clearing denominators in N
        lo_s = min(self.coeffs) if self.coeffs else 0
        lo_o = min(other.coeffs)
        num = {e - lo_s: c for e, c in self.coeffs.items()}
        den = {e - lo_o: c for e, c in other.coeffs.items()}
        dd = max(den)
        lead = den[dd]
        quot = {}
        while num:
            nd = max(num)
            if nd < dd:
                raise ValueError("inexact Laurent division")
            q = num[nd] / lead
            quot[nd - dd] = q
            for e, c in den.items():
                k = nd - dd + e
                s = num.get(k, Fraction(0)) - q * c
                if s:
                    num[k] = s
                elif k in num:
                    del num[k]
        out = LaurentPoly.__new__(LaurentPoly)
        out.coeffs = {e + lo_s - lo_o: c for e, c in quot.items()}
        return out

    def __call__(self, n):
        """Evaluate at a rational value of N."""
        n = Fraction(n)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * n ** e
        return total

    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    def text(self, var="N"):
        """Canonical text form ``c_k*N^k + ...`` with exact fractions."""
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}{var}^{e}"
                if c < 0:
                    term = "-" + term
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.text()})"


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
N = LaurentPoly.var()
