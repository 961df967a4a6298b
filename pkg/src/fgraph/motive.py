"""Integer polynomials in L or T = L - 1, used for classes in Z[L] and CSM polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

BASES = ("L", "T")


class NotDivisibleError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPoly:
    """Univariate polynomial with arbitrary precision integer coefficients.

    ``coeffs[k]`` is the coefficient of ``x**k`` where ``x`` is ``L`` or ``T``
    depending on ``basis``.  Arithmetic between polynomials in different bases
    converts the right operand into the basis of the left one.
    """

    coeffs: tuple[int, ...] = ()
    basis: str = "L"

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    # constructors

    @classmethod
    def const(cls, c: int, basis: str = "L") -> "IntPoly":
        return cls((c,), basis)

    @classmethod
    def var(cls, basis: str = "L") -> "IntPoly":
        return cls((0, 1), basis)

    @classmethod
    def monomial(cls, k: int, c: int = 1, basis: str = "L") -> "IntPoly":
        return cls((0,) * k + (c,), basis)

    @classmethod
    def projective_space(cls, n: int, basis: str = "L") -> "IntPoly":
        """Class of P^n; P^{-1} is the empty variety."""
        if n < 0:
            return cls((), basis)
        return cls((1,) * (n + 1), "L").to_basis(basis)

    # basics

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def to_basis(self, basis: str) -> "IntPoly":
        """Binomial change of variables between L and T = L - 1."""
        if basis == self.basis:
            return self
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        shift = 1 if self.basis == "L" else -1
        return IntPoly(self._shifted(shift), basis)

    def _shifted(self, c: int) -> tuple[int, ...]:
        # coefficients of p(x + c)
        n = len(self.coeffs)
        out = [0] * n
        for k, a in enumerate(self.coeffs):
            if a:
                for j in range(k + 1):
                    out[j] += a * comb(k, j) * c ** (k - j)
        return tuple(out)

    def shift(self, c: int) -> "IntPoly":
        """p(x + c) in the same basis (no change of meaning intended)."""
        return IntPoly(self._shifted(c), self.basis)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def evaluate_at_L(self, q):
        """Value at L = q regardless of basis."""
        return self(q) if self.basis == "L" else self(q - 1)

    # ring operations

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other.to_basis(self.basis)
        if isinstance(other, int):
            return IntPoly((other,), self.basis)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPoly(tuple(self.coeff(k) + o.coeff(k) for k in range(n)), self.basis)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-a for a in self.coeffs), self.basis)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return IntPoly((), self.basis)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out), self.basis)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = IntPoly((1,), self.basis)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,), self.basis)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.to_basis(self.basis).coeffs

    def __hash__(self):
        return hash(self.to_basis("L").coeffs)

    def divmod_linear(self, root: int) -> tuple["IntPoly", int]:
        """Synthetic division by (x - root) in the polynomial's own variable."""
        if not self.coeffs:
            return IntPoly((), self.basis), 0
        quot = [0] * (len(self.coeffs) - 1)
        acc = 0
        for k in range(len(self.coeffs) - 1, -1, -1):
            acc = acc * root + self.coeffs[k]
            if k:
                quot[k - 1] = acc
        return IntPoly(tuple(quot), self.basis), acc

    def exact_div_linear(self, root: int) -> "IntPoly":
        q, r = self.divmod_linear(root)
        if r:
            var = self.basis
            raise NotDivisibleError(f"not divisible by ({var} - {root}): remainder {r}")
        return q

    def div_L_minus_1(self) -> "IntPoly":
        """Exact division by L - 1, returned in the original basis."""
        if self.basis == "T":
            if self.coeff(0):
                raise NotDivisibleError(f"not divisible by L - 1: remainder {self.coeff(0)}")
            return IntPoly(self.coeffs[1:], "T")
        return self.exact_div_linear(1)

    # display / io

    def __str__(self):
        if not self.coeffs:
            return "0"
        v = self.basis
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[k]
            if not a:
                continue
            mon = "" if k == 0 else (v if k == 1 else f"{v}^{k}")
            if mon and abs(a) == 1:
                term = mon
            else:
                term = f"{abs(a)}{'*' + mon if mon else ''}"
            sign = "-" if a < 0 else "+"
            parts.append((sign, term))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)}, basis={self.basis!r})"

    def to_json(self) -> dict:
        return {"basis": self.basis, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, d: dict) -> "IntPoly":
        return cls(tuple(int(c) for c in d["coeffs"]), d["basis"])


L = IntPoly.var("L")
T = IntPoly.var("T")


def to_basis(p: IntPoly, basis: str) -> IntPoly:
    return p.to_basis(basis)


def euler_characteristic(p: IntPoly) -> int:
    """chi is the ring homomorphism L -> 1."""
    return p.to_basis("T").coeff(0)


def vanishing_order_at_one(p: IntPoly) -> int:
    """Order of vanishing at L = 1 (lowest nonzero T-coefficient)."""
    c = p.to_basis("T").coeffs
    if not c:
        raise ValueError("the zero polynomial has no finite vanishing order")
    return next(k for k, a in enumerate(c) if a)


def f1_point_count(p: IntPoly) -> int:
    """lim_{q->1} P(q)/(q-1)^r with r the vanishing order."""
    return p.to_basis("T").coeffs[vanishing_order_at_one(p)]


def is_T_nonnegative(p: IntPoly) -> tuple[bool, tuple[int, int] | None]:
    """True iff every T-coefficient is >= 0; otherwise the first offending (degree, coefficient)."""
    for k, a in enumerate(p.to_basis("T").coeffs):
        if a < 0:
            return False, (k, a)
    return True, None


def positivity_witness(coeffs: Sequence[int]) -> tuple[int, int] | None:
    for k, a in enumerate(coeffs):
        if a < 0:
            return (k, a)
    return None
