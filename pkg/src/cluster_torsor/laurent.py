"""Exact Laurent polynomials and mutation-shaped rational functions.

Coefficients are exact rationals.  Denominators are tracked multisets of
binomials (1 + c*z^psi); this shape is closed under every pullback the
package performs, so no general multivariate gcd is ever needed.

The dict-level primitives (add, multiply, exact binomial division) live in a
kernel module selected at import time: the compiled Cython kernel when built,
otherwise the pure-Python twin.  Set CLUSTER_TORSOR_PURE=1 to force the
pure kernel.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DenominatorVanishesError,
    PsiUNotOrthogonalError,
    RankMismatchError,
    UnsupportedDenominatorError,
    ZeroInputError,
)

if os.environ.get("CLUSTER_TORSOR_PURE"):
    from . import _poly_py as _kernel
else:
    try:
        from . import _poly_speedups as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _poly_py as _kernel

KERNEL_BACKEND: str = _kernel.BACKEND

Exp = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _lex_positive(psi: Exp) -> bool:
    for x in psi:
        if x:
            return x > 0
    return False


class LaurentPoly:
    """A multivariate Laurent polynomial over Q with a fixed ambient rank."""

    __slots__ = ("rank", "_t")

    def __init__(self, rank: int, terms: Mapping[Exp, Fraction] | None = None):
        t = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if c:
                    e = tuple(int(x) for x in e)
                    if len(e) != rank:
                        raise RankMismatchError(f"exponent {e} in rank-{rank} polynomial")
                    t[e] = c
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_t", t)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: _ONE})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(len(tuple(exp)), {tuple(int(x) for x in exp): _as_fraction(coeff)})

    @classmethod
    def _raw(cls, rank: int, terms: dict) -> "LaurentPoly":
        p = object.__new__(cls)
        object.__setattr__(p, "rank", rank)
        object.__setattr__(p, "_t", terms)
        return p

    # -- inspection -----------------------------------------------------
    def items(self):
        return self._t.items()

    def support(self) -> list[Exp]:
        return sorted(self._t)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._t.get(tuple(exp), _ZERO)

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self) -> int:
        return len(self._t)

    def as_monomial(self) -> tuple[Exp, Fraction] | None:
        if len(self._t) != 1:
            return None
        ((e, c),) = self._t.items()
        return e, c

    def min_pairing(self, u: Sequence[int]) -> int:
        if not self._t:
            raise ZeroInputError("valuation of the zero polynomial")
        return min(_dot(u, e) for e in self._t)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "LaurentPoly"):
        if self.rank != other.rank:
            raise RankMismatchError(f"ranks {self.rank} and {other.rank}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly._raw(self.rank, _kernel.add_terms(self._t, other._t))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.rank, {e: -c for e, c in self._t.items()})

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return LaurentPoly._raw(self.rank, _kernel.mul_terms(self._t, other._t))
        c = _as_fraction(other)
        if not c:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly._raw(self.rank, {e: a * c for e, a in self._t.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative power of a LaurentPoly; use RationalFn")
        result = LaurentPoly.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def shift(self, exp: Sequence[int], coeff=1) -> "LaurentPoly":
        """Multiply by the monomial coeff*z^exp."""
        c = _as_fraction(coeff)
        e0 = tuple(int(x) for x in exp)
        return LaurentPoly._raw(
            self.rank,
            {tuple(a + b for a, b in zip(e, e0)): cc * c for e, cc in self._t.items()},
        )

    def evaluate(self, point: "TorusPoint") -> Fraction:
        total = _ZERO
        for e, c in self._t.items():
            total += c * point.monomial_value(e)
        return total

    # -- canonical form ----------------------------------------------------
    def render(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t):
            parts.append(f"{self._t[e]}*z^{e!r}".replace(" ", ""))
        return " + ".join(parts)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.rank == other.rank
            and self._t == other._t
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._t.items())))

    def __repr__(self) -> str:
        return f"<LaurentPoly {self.render()}>"


def binomial(rank: int, psi: Sequence[int], coeff=1) -> LaurentPoly:
    """The binomial 1 + coeff*z^psi."""
    psi = tuple(int(x) for x in psi)
    zero = (0,) * rank
    if psi == zero:
        return LaurentPoly(rank, {zero: _ONE + _as_fraction(coeff)})
    return LaurentPoly(rank, {zero: _ONE, psi: _as_fraction(coeff)})


def divide_binomial(f: LaurentPoly, psi: Sequence[int], coeff=1) -> LaurentPoly | None:
    """Exact quotient f / (1 + coeff*z^psi), or None when division is inexact."""
    psi = tuple(int(x) for x in psi)
    if not any(psi):
        raise ValueError("division by a constant binomial; psi must be nonzero")
    q = _kernel.divide_binomial_terms(f._t, psi, _as_fraction(coeff))
    if q is None:
        return None
    return LaurentPoly._raw(f.rank, q)


def factor_multiplicity(f: LaurentPoly, psi: Sequence[int], coeff=1) -> int:
    """Largest k with (1 + coeff*z^psi)^k dividing f exactly."""
    if f.is_zero():
        raise ZeroInputError("factor multiplicity of the zero polynomial")
    k = 0
    while True:
        q = divide_binomial(f, psi, coeff)
        if q is None:
            return k
        f = q
        k += 1


class TorusPoint:
    """A point of a split torus: a tuple of nonzero rationals."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        cs = tuple(_as_fraction(c) for c in coords)
        if any(c == 0 for c in cs):
            raise ValueError("torus point with a zero coordinate")
        object.__setattr__(self, "coords", cs)

    def __setattr__(self, *a):
        raise AttributeError("TorusPoint is immutable")

    def __len__(self) -> int:
        return len(self.coords)

    def monomial_value(self, exp: Sequence[int]) -> Fraction:
        if len(exp) != len(self.coords):
            raise RankMismatchError("exponent length does not match torus point")
        val = _ONE
        for c, e in zip(self.coords, exp):
            val *= c ** e
        return val

    def __repr__(self) -> str:
        return f"TorusPoint({', '.join(str(c) for c in self.coords)})"


class RationalFn:
    """num / prod (1 + c*z^psi)^k with psi stored lex-positive.

    The numerator never retains a factor equal to one of the denominator
    binomials; construction cancels them.  Equality is mathematical (by
    cross-multiplication), so instances are deliberately unhashable.
    """

    __slots__ = ("num", "_den")

    def __init__(self, num: LaurentPoly, den: Mapping[tuple[Exp, Fraction], int] | None = None):
        work = num
        clean: dict[tuple[Exp, Fraction], int] = {}
        pending = []
        if den:
            for (psi, c), k in den.items():
                pending.append((tuple(int(x) for x in psi), _as_fraction(c), int(k)))
        for psi, c, k in pending:
            if k < 0:
                raise ValueError("negative denominator exponent")
            if k == 0 or c == 0:
                continue
            if not any(psi):
                const = _ONE + c
                if const == 0:
                    raise DenominatorVanishesError("denominator factor (1 + -1)")
                work = work * (_ONE / const ** k)
                continue
            if not _lex_positive(psi):
                # 1 + c z^psi = c z^psi (1 + (1/c) z^-psi)
                neg = tuple(-x for x in psi)
                work = work.shift(tuple(k * x for x in neg), (Fraction(1) / c) ** k)
                key = (neg, _ONE / c)
            else:
                key = (psi, c)
            clean[key] = clean.get(key, 0) + k
        if work.is_zero():
            clean = {}
        else:
            for key in sorted(clean, key=lambda kc: (kc[0], str(kc[1]))):
                psi, c = key
                k = clean[key]
                while k > 0:
                    q = divide_binomial(work, psi, c)
                    if q is None:
                        break
                    work = q
                    k -= 1
                if k:
                    clean[key] = k
                else:
                    del clean[key]
        object.__setattr__(self, "num", work)
        object.__setattr__(self, "_den", clean)

    def __setattr__(self, *a):
        raise AttributeError("RationalFn is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFn":
        return cls(p)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "RationalFn":
        return cls(LaurentPoly.monomial(exp, coeff))

    @classmethod
    def one(cls, rank: int) -> "RationalFn":
        return cls(LaurentPoly.one(rank))

    @classmethod
    def zero(cls, rank: int) -> "RationalFn":
        return cls(LaurentPoly.zero(rank))

    # -- inspection -------------------------------------------------------
    @property
    def rank(self) -> int:
        return self.num.rank

    def denominator_factors(self) -> list[tuple[Exp, Fraction, int]]:
        return sorted(((psi, c, k) for (psi, c), k in self._den.items()),
                      key=lambda t: (t[0], str(t[1])))

    def den_poly(self) -> LaurentPoly:
        p = LaurentPoly.one(self.rank)
        for (psi, c), k in self._den.items():
            p = p * binomial(self.rank, psi, c) ** k
        return p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> LaurentPoly | None:
        """The cleared Laurent form, when every denominator factor divides out."""
        return self.num if not self._den else None

    def as_monomial(self) -> tuple[Exp, Fraction] | None:
        if self._den:
            return None
        return self.num.as_monomial()

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "RationalFn"):
        if self.rank != other.rank:
            raise RankMismatchError(f"ranks {self.rank} and {other.rank}")

    def __mul__(self, other) -> "RationalFn":
        if isinstance(other, LaurentPoly):
            other = RationalFn(other)
        if isinstance(other, RationalFn):
            self._check(other)
            den = dict(self._den)
            for key, k in other._den.items():
                den[key] = den.get(key, 0) + k
            return RationalFn(self.num * other.num, den)
        return RationalFn(self.num * other, self._den)

    __rmul__ = __mul__

    def __add__(self, other: "RationalFn") -> "RationalFn":
        if isinstance(other, LaurentPoly):
            other = RationalFn(other)
        self._check(other)
        keys = set(self._den) | set(other._den)
        den = {key: max(self._den.get(key, 0), other._den.get(key, 0)) for key in keys}
        n1 = self.num
        n2 = other.num
        for key in keys:
            psi, c = key
            extra1 = den[key] - self._den.get(key, 0)
            extra2 = den[key] - other._den.get(key, 0)
            if extra1:
                n1 = n1 * binomial(self.rank, psi, c) ** extra1
            if extra2:
                n2 = n2 * binomial(self.rank, psi, c) ** extra2
        return RationalFn(n1 + n2, den)

    def __sub__(self, other) -> "RationalFn":
        return self + (-(other if isinstance(other, RationalFn) else RationalFn(other)))

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self._den)

    def reciprocal(self) -> "RationalFn":
        """1/f.  Requires the numerator to factor as monomial * binomials."""
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        den_as_num = self.den_poly()
        new_den: dict[tuple[Exp, Fraction], int] = {}
        residual = self.num
        while True:
            mono = residual.as_monomial()
            if mono is not None:
                e, c = mono
                inv = den_as_num.shift(tuple(-x for x in e), _ONE / c)
                return RationalFn(inv, new_den)
            if len(residual) == 2:
                (e1, a1), (e2, a2) = sorted(residual.items())
                psi = tuple(y - x for x, y in zip(e1, e2))
                key = (psi, a2 / a1)
                new_den[key] = new_den.get(key, 0) + 1
                residual = LaurentPoly.monomial(e1, a1)
                continue
            reduced = None
            for (psi, c), k in list(new_den.items()):
                q = divide_binomial(residual, psi, c)
                if q is not None:
                    reduced = q
                    break
            if reduced is None:
                raise UnsupportedDenominatorError(
                    f"cannot invert numerator with {len(residual)} terms: {residual.render()}"
                )
            residual = reduced

    def __pow__(self, k: int) -> "RationalFn":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = RationalFn.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        if isinstance(other, LaurentPoly):
            other = RationalFn(other)
        return self * other.reciprocal()

    # -- analysis -------------------------------------------------------------
    def evaluate(self, point: TorusPoint) -> Fraction:
        total = self.num.evaluate(point)
        for (psi, c), k in self._den.items():
            v = _ONE + c * point.monomial_value(psi)
            if v == 0:
                raise DenominatorVanishesError(f"denominator (1 + {c}*z^{psi}) vanishes")
            total /= v ** k
        return total

    def toric_valuation(self, u: Sequence[int]) -> int:
        """Order of vanishing along the boundary divisor of the direction u."""
        if self.num.is_zero():
            raise ZeroInputError("toric valuation of zero")
        val = self.num.min_pairing(u)
        for (psi, c), k in self._den.items():
            val -= k * min(0, _dot(u, psi))
        return val

    def render(self) -> str:
        if not self._den:
            return self.num.render()
        factors = []
        for psi, c, k in self.denominator_factors():
            base = f"(1 + {c}*z^{psi!r})".replace(" ", "")
            factors.append(base if k == 1 else f"{base}^{k}")
        return f"({self.num.render()}) / " + "*".join(factors)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            other = RationalFn(other)
        if not isinstance(other, RationalFn) or self.rank != other.rank:
            return NotImplemented
        return self.num * other.den_poly() == other.num * self.den_poly()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<RationalFn {self.render()}>"


def mutation_pullback(f: RationalFn | LaurentPoly, u: Sequence[int], psi: Sequence[int],
                      coeff=1) -> RationalFn:
    """Pullback z^phi -> z^phi (1 + coeff*z^psi)^(-phi(u)), extended to fractions.

    Requires psi(u) = 0, which makes the map a ring homomorphism with inverse
    given by flipping the sign of u.
    """
    psi = tuple(int(x) for x in psi)
    u = tuple(int(x) for x in u)
    if _dot(psi, u) != 0:
        raise PsiUNotOrthogonalError(f"psi(u) = {_dot(psi, u)} != 0")
    if isinstance(f, LaurentPoly):
        f = RationalFn(f)
    if len(u) != f.rank:
        raise RankMismatchError("u does not match the ambient rank")
    c = _as_fraction(coeff)
    rank = f.rank

    def pull_poly(p: LaurentPoly) -> RationalFn:
        if p.is_zero():
            return RationalFn.zero(rank)
        pairings = {e: _dot(e, u) for e in p._t}
        kmax = max(0, max(pairings.values()))
        b = binomial(rank, psi, c)
        total = LaurentPoly.zero(rank)
        for e, a in p.items():
            total = total + LaurentPoly.monomial(e, a) * b ** (kmax - pairings[e])
        return RationalFn(total, {(psi, c): kmax} if kmax else None)

    result = pull_poly(f.num)
    for (dpsi, dc), k in f._den.items():
        ci = _dot(dpsi, u)
        if ci == 0:
            den = dict(result._den)
            den[(dpsi, dc)] = den.get((dpsi, dc), 0) + k
            result = RationalFn(result.num, den)
            continue
        # pulled denominator factor: 1 + dc * z^dpsi * (1 + c z^psi)^(-ci)
        if ci < 0:
            pulled = RationalFn(
                LaurentPoly.one(rank)
                + LaurentPoly.monomial(dpsi, dc) * binomial(rank, psi, c) ** (-ci)
            )
        else:
            pulled = RationalFn(
                binomial(rank, psi, c) ** ci + LaurentPoly.monomial(dpsi, dc),
                {(psi, c): ci},
            )
        result = result * pulled.reciprocal() ** k
    return result


def inverse_mutation_pullback(f: RationalFn | LaurentPoly, u: Sequence[int],
                              psi: Sequence[int], coeff=1) -> RationalFn:
    """Compositional inverse of ``mutation_pullback`` with the same (u, psi)."""
    return mutation_pullback(f, tuple(-x for x in u), psi, coeff)
