"""Base fields and their quadratic symbol calculus.

Supported bases: odd-order finite fields F_q (built as towers of
polynomial quotients over their prime field), the rationals, and
rational function fields over either.  On top of the arithmetic sit
square classes with canonical keys, places with residue fields,
valuations, polynomial factorization over F_q, and the Legendre /
Hilbert / tame symbols.

Conventions that the rest of the library leans on:

* square-class keys carry squarefree representatives, so a place divides
  a key with multiplicity 0 or 1 and residue maps never see squares;
* finite places of a function field are monic irreducible polynomials,
  plus the degree place at infinity with uniformizer 1/t;
* all constructors are cached, so field handles compare by identity.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd as int_gcd
from typing import Iterable, Optional, Sequence

from .errors import (
    EvenPrimeForLegendre,
    InfinitePlace,
    MixedFields,
    NonIrreducibleModulus,
    UnsupportedField,
    UnsupportedPlace,
    ZeroArgument,
    ZeroInversion,
    ZeroPolynomial,
)

# ---------------------------------------------------------------------------
# integer helpers


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ZeroArgument("factorization needs a positive integer")
    out = []
    for p in itertools.chain([2], itertools.count(3, 2)):
        if p * p > n:
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def squarefree_part(n: int) -> int:
    """The squarefree kernel of |n| (n nonzero)."""
    if n == 0:
        raise ZeroArgument("squarefree part of zero")
    out = 1
    for p, e in factor_int(abs(n)):
        if e % 2:
            out *= p
    return out


def _prime_power(q: int) -> tuple[int, int]:
    fac = factor_int(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    return fac[0]


# ---------------------------------------------------------------------------
# fields and elements


class Field:
    """Common surface of all field handles."""

    kind: str = ""

    def elem(self, x) -> "FieldElem":
        raise NotImplementedError

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, self._zero_raw())

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, self._one_raw())

    def parse(self, text: str) -> "FieldElem":
        return parse_elem(self, text)


class FieldElem:
    """An element tied to its field handle; arithmetic stays inside one
    field and raises ``MixedFields`` otherwise."""

    __slots__ = ("field", "val")

    def __init__(self, field: Field, val):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "val", val)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise MixedFields(
                    f"cannot combine elements of {self.field} and {other.field}"
                )
            return other
        return self.field.elem(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field._add(self.val, o.val))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field._neg(self.val))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field._mul(self.val, o.val))

    __rmul__ = __mul__

    def inv(self) -> "FieldElem":
        return FieldElem(self.field, self.field._inv(self.val))

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return self.val != self.field._zero_raw()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.val == other.val
        try:
            return self == self.field.elem(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __repr__(self):
        return self.field._format(self.val)


class FiniteField(Field):
    """F_q for odd prime powers q, as a tower of extensions over F_p.

    Raw element values are ints in [0, p) at the bottom and fixed-length
    coefficient tuples over the base at each extension step."""

    kind = "finite"

    def __init__(self, p: int, base: Optional["FiniteField"] = None, modulus=None, _token=None):
        if _token is not _FF_TOKEN:
            raise TypeError("use finite_field() or extension_field()")
        self.p = p
        self.base = base
        self.modulus = modulus  # Poly over base, monic irreducible
        if base is None:
            self.order = p
            self.degree = 1
        else:
            self.order = base.order ** modulus.degree()
            self.degree = base.degree * modulus.degree()
        self._nonsquare = None
        # lazy lookup tables for small extension towers: structural
        # arithmetic recurses through every level, so memoize per value
        small = base is not None and self.order <= 4096
        self._mul_memo = {} if small else None
        self._add_memo = {} if small else None
        self._inv_memo = {} if small else None

    # raw arithmetic -------------------------------------------------

    def _zero_raw(self):
        if self.base is None:
            return 0
        return (self.base._zero_raw(),) * self.modulus.degree()

    def _one_raw(self):
        if self.base is None:
            return 1 % self.p
        d = self.modulus.degree()
        return (self.base._one_raw(),) + (self.base._zero_raw(),) * (d - 1)

    def _add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        memo = self._add_memo
        if memo is not None:
            key = (a, b)
            v = memo.get(key)
            if v is None:
                v = tuple(self.base._add(x, y) for x, y in zip(a, b))
                memo[key] = v
            return v
        return tuple(self.base._add(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        if self.base is None:
            return (-a) % self.p
        return tuple(self.base._neg(x) for x in a)

    def _mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        memo = self._mul_memo
        if memo is not None:
            key = (a, b)
            v = memo.get(key)
            if v is None:
                prod = _pl_mul(self.base, list(a), list(b))
                v = self._pad(_pl_rem(self.base, prod, list(self.modulus.coeffs)))
                memo[key] = v
            return v
        prod = _pl_mul(self.base, list(a), list(b))
        rem = _pl_rem(self.base, prod, list(self.modulus.coeffs))
        return self._pad(rem)

    def _inv(self, a):
        if a == self._zero_raw():
            raise ZeroInversion(f"division by zero in {self}")
        if self.base is None:
            return pow(a, -1, self.p)
        memo = self._inv_memo
        if memo is not None:
            v = memo.get(a)
            if v is None:
                v = self._inv_struct(a)
                memo[a] = v
            return v
        return self._inv_struct(a)

    def _inv_struct(self, a):
        g, s = _pl_invmod(self.base, list(a), list(self.modulus.coeffs))
        if g is None:
            raise ZeroInversion(f"non-invertible element in {self}")
        return self._pad(s)

    def _pad(self, coeffs: list) -> tuple:
        d = self.modulus.degree()
        z = self.base._zero_raw()
        return tuple(coeffs[i] if i < len(coeffs) else z for i in range(d))

    def _pow_raw(self, a, e: int):
        out = self._one_raw()
        while e:
            if e & 1:
                out = self._mul(out, a)
            a = self._mul(a, a)
            e >>= 1
        return out

    def _format(self, a) -> str:
        if self.base is None:
            return str(a)
        parts = []
        for i, c in enumerate(a):
            if c == self.base._zero_raw():
                continue
            cs = self.base._format(c)
            if i == 0:
                parts.append(cs)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                parts.append(xs if cs == "1" else f"{cs}*{xs}")
        return " + ".join(parts) if parts else "0"

    # public surface -------------------------------------------------

    def elem(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.field is self:
                return x
            if isinstance(x.field, FiniteField) and x.field is self.base:
                return FieldElem(self, self._pad([x.val]))
            raise MixedFields(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, int):
            if self.base is None:
                return FieldElem(self, x % self.p)
            return FieldElem(self, self._pad([self.base.elem(x).val]))
        if isinstance(x, tuple) and self.base is not None:
            return FieldElem(self, self._pad([self.base.elem(c).val for c in x]))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def elements(self) -> Iterable[FieldElem]:
        """All elements, in a fixed counting order."""
        for raw in self._elements_raw():
            yield FieldElem(self, raw)

    def _elements_raw(self):
        if self.base is None:
            yield from range(self.p)
        else:
            base_vals = list(self.base._elements_raw())
            d = self.modulus.degree()
            for tup in itertools.product(base_vals, repeat=d):
                yield tuple(reversed(tup))  # constant coefficient varies fastest

    def units(self) -> Iterable[FieldElem]:
        for e in self.elements():
            if e:
                yield e

    def is_square_raw(self, a) -> bool:
        if a == self._zero_raw():
            raise ZeroArgument("square class of zero")
        return self._pow_raw(a, (self.order - 1) // 2) == self._one_raw()

    def nonsquare(self) -> FieldElem:
        """First nonsquare in enumeration order (canonical representative
        of the nontrivial square class)."""
        if self._nonsquare is None:
            for e in self.units():
                if not self.is_square_raw(e.val):
                    self._nonsquare = e
                    break
        return self._nonsquare

    def generator(self) -> FieldElem:
        """First multiplicative generator in enumeration order."""
        target = self.order - 1
        primes = [p for p, _ in factor_int(target)] if target > 1 else []
        for e in self.units():
            if all(self._pow_raw(e.val, target // p) != self._one_raw() for p in primes):
                return e
        raise IndexError("no generator found")  # unreachable

    def dlog(self, x: FieldElem) -> int:
        """Discrete log of a nonzero element with respect to the fixed
        generator, by exhaustive table (fields here stay desk-sized)."""
        if isinstance(x, FieldElem):
            if x.field is not self:
                raise MixedFields("discrete log in the wrong field")
            x = x.val
        if x == self._zero_raw():
            raise ZeroArgument("discrete log of zero")
        table = getattr(self, "_dlog_table", None)
        if table is None:
            g = self.generator().val
            table = {}
            acc = self._one_raw()
            for i in range(self.order - 1):
                table[acc] = i
                acc = self._mul(acc, g)
            self._dlog_table = table
        return table[x]

    def __repr__(self):
        return f"F{self.order}"


_FF_TOKEN = object()


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    """The field with q elements, q an odd prime power.  For prime powers
    the modulus is the first monic irreducible of the right degree in
    lexicographic coefficient order, so the construction is canonical."""
    p, e = _prime_power(q)
    if p == 2:
        raise ValueError("finite fields of characteristic 2 are not supported")
    base = _prime_field(p)
    if e == 1:
        return base
    mod = _first_irreducible(base, e)
    return extension_field(base, mod)


@lru_cache(maxsize=None)
def _prime_field(p: int) -> FiniteField:
    return FiniteField(p, _token=_FF_TOKEN)


def _residue_prime_field(p: int) -> FiniteField:
    # residue fields at rational places share the standard handles; the
    # place at 2 gets a characteristic-2 carrier that exists only here
    return _prime_field(p)


def extension_field(base: FiniteField, modulus: "Poly") -> FiniteField:
    """Quotient of base[x] by a monic irreducible modulus."""
    if modulus.field is not base:
        raise MixedFields("modulus is not a polynomial over the base field")
    if modulus.degree() < 1 or not modulus.is_monic():
        raise NonIrreducibleModulus("modulus must be monic of positive degree")
    return _extension_cached(base, modulus.coeffs)


@lru_cache(maxsize=None)
def _extension_cached(base: FiniteField, coeffs: tuple) -> FiniteField:
    # irreducibility is checked once per distinct modulus; failures are
    # not cached, so a bad modulus raises on every call
    mod = Poly(base, coeffs)
    if not poly_is_irreducible(mod):
        raise NonIrreducibleModulus(f"{mod} factors over {base}")
    return FiniteField(base.p, base, mod, _token=_FF_TOKEN)


def _first_irreducible(base: FiniteField, degree: int) -> "Poly":
    # scan monic polynomials x^d + c_{d-1} x^{d-1} + ... + c_0, ordered
    # lexicographically by (c_{d-1}, ..., c_0) in element counting order
    base_vals = list(base._elements_raw())
    for tup in itertools.product(base_vals, repeat=degree):
        coeffs = tuple(reversed(tup)) + (base._one_raw(),)
        f = Poly(base, coeffs)
        if poly_is_irreducible(f):
            return f
    raise IndexError("no irreducible polynomial found")  # unreachable


class RationalField(Field):
    """The rationals; raw values are ``Fraction`` in lowest terms."""

    kind = "rational"

    def _zero_raw(self):
        return Fraction(0)

    def _one_raw(self):
        return Fraction(1)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if not a:
            raise ZeroInversion("division by zero in Q")
        return 1 / a

    def _format(self, a):
        return str(a)

    def elem(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.field is self:
                return x
            raise MixedFields(f"cannot coerce element of {x.field} into Q")
        if isinstance(x, (int, Fraction)):
            return FieldElem(self, Fraction(x))
        if isinstance(x, str):
            return FieldElem(self, Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into Q")

    def __repr__(self):
        return "Q"


@lru_cache(maxsize=None)
def rationals() -> RationalField:
    return RationalField()


# ---------------------------------------------------------------------------
# polynomials over a field


def _pl_trim(field: Field, c: list) -> list:
    z = field._zero_raw()
    while c and c[-1] == z:
        c.pop()
    return c


def _pl_add(field: Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    z = field._zero_raw()
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else z
        y = b[i] if i < len(b) else z
        out.append(field._add(x, y))
    return _pl_trim(field, out)


def _pl_neg(field: Field, a: list) -> list:
    return [field._neg(x) for x in a]


def _pl_mul(field: Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    z = field._zero_raw()
    out = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            out[i + j] = field._add(out[i + j], field._mul(x, y))
    return _pl_trim(field, out)


def _pl_divmod(field: Field, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroInversion("polynomial division by zero")
    a = list(a)
    z = field._zero_raw()
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [], _pl_trim(field, a)
    inv_lc = field._inv(b[-1])
    q = [z] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = field._mul(a[i + db], inv_lc)
        if c != z:
            q[i] = c
            for j in range(db + 1):
                a[i + j] = field._add(a[i + j], field._neg(field._mul(c, b[j])))
    return _pl_trim(field, q), _pl_trim(field, a)


def _pl_rem(field: Field, a: list, b: list) -> list:
    return _pl_divmod(field, a, b)[1]


def _pl_invmod(field: Field, a: list, m: list):
    """(1, s) with s*a = 1 mod m when gcd(a, m) = 1, else (None, None)."""
    r0, r1 = list(m), _pl_rem(field, a, m)
    s0, s1 = [], [field._one_raw()]
    while r1:
        q, r = _pl_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _pl_add(field, s0, _pl_neg(field, _pl_mul(field, q, s1)))
    if len(r0) != 1:
        return None, None
    inv_lc = field._inv(r0[0])
    return 1, _pl_trim(field, [field._mul(x, inv_lc) for x in s0])


class Poly:
    """Dense univariate polynomial over a field handle.  Coefficients are
    raw field values, lowest degree first, with no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(_pl_trim(field, list(coeffs))))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def from_elems(cls, field: Field, elems: Sequence) -> "Poly":
        return cls(field, [field.elem(e).val for e in elems])

    @classmethod
    def constant(cls, field: Field, c) -> "Poly":
        return cls(field, [field.elem(c).val])

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, [field._zero_raw(), field._one_raw()])

    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field._one_raw()

    def lc(self) -> FieldElem:
        if not self.coeffs:
            raise ZeroPolynomial("leading coefficient of zero")
        return FieldElem(self.field, self.coeffs[-1])

    def coeff(self, i: int) -> FieldElem:
        z = self.field._zero_raw()
        return FieldElem(self.field, self.coeffs[i] if i < len(self.coeffs) else z)

    def _same(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(self.field, other)
        if other.field is not self.field:
            raise MixedFields("polynomials over different fields")
        return other

    def __add__(self, other):
        o = self._same(other)
        return Poly(self.field, _pl_add(self.field, list(self.coeffs), list(o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, _pl_neg(self.field, list(self.coeffs)))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        o = self._same(other)
        return Poly(self.field, _pl_mul(self.field, list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._same(other)
        q, r = _pl_divmod(self.field, list(self.coeffs), list(o.coeffs))
        return Poly(self.field, q), Poly(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        inv = self.field._inv(self.coeffs[-1])
        return Poly(self.field, [self.field._mul(c, inv) for c in self.coeffs])

    def derivative(self) -> "Poly":
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            acc = self.field._zero_raw()
            for _ in range(i):
                acc = self.field._add(acc, c)
            out.append(acc)
        return Poly(self.field, out)

    def eval(self, x) -> FieldElem:
        xv = self.field.elem(x).val
        acc = self.field._zero_raw()
        for c in reversed(self.coeffs):
            acc = self.field._add(self.field._mul(acc, xv), c)
        return FieldElem(self.field, acc)

    def pow_mod(self, e: int, m: "Poly") -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        mm = list(self._same(m).coeffs)
        acc = [self.field._one_raw()]
        base = _pl_rem(self.field, list(self.coeffs), mm)
        while e:
            if e & 1:
                acc = _pl_rem(self.field, _pl_mul(self.field, acc, base), mm)
            base = _pl_rem(self.field, _pl_mul(self.field, base, base), mm)
            e >>= 1
        return Poly(self.field, acc)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._same(other)
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == self.field._zero_raw():
                continue
            cs = self.field._format(c)
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append("t" if cs == "1" else f"{cs}*t")
            else:
                parts.append(f"t^{i}" if cs == "1" else f"{cs}*t^{i}")
        return " + ".join(parts)


def polynomial(field: Field, coeffs: Sequence) -> Poly:
    """Polynomial from low-to-high coefficients coercible into ``field``."""
    return Poly.from_elems(field, coeffs)


def _flat_key(field: Field, raw) -> tuple[int, ...]:
    """Stable integer key for a raw field value (sorting, seeds)."""
    if isinstance(field, FiniteField):
        if field.base is None:
            return (raw,)
        out = []
        for c in raw:
            out.extend(_flat_key(field.base, c))
        return tuple(out)
    if isinstance(field, RationalField):
        return (raw.numerator, raw.denominator)
    raise TypeError(f"no canonical key over {field}")


def _poly_key(f: Poly) -> tuple:
    key = []
    for c in f.coeffs:
        key.extend(_flat_key(f.field, c))
    return (f.degree(), tuple(key))


def poly_is_irreducible(f: Poly) -> bool:
    """Irreducibility over a finite field via Frobenius composition:
    x^{Q^d} = x mod f, and x^{Q^{d/r}} - x coprime to f for prime r | d."""
    field = f.field
    if not isinstance(field, FiniteField):
        raise UnsupportedField("irreducibility test needs a finite base field")
    d = f.degree()
    if d < 1:
        return False
    if d == 1:
        return True
    if f.coeffs[0] == field._zero_raw():
        return False  # divisible by x
    q = field.order
    x = Poly.x(field)
    frob = x.pow_mod(q**d, f)
    if frob != x % f:
        return False
    for r, _ in factor_int(d):
        g = x.pow_mod(q ** (d // r), f) - x
        if f.gcd(g).degree() != 0:
            return False
    return True


def _pth_root(f: Poly) -> Poly:
    # f with zero derivative over F_q is g(x^p); recover g
    field = f.field
    p = field.p
    e = field.order // p
    out = []
    for i in range(0, len(f.coeffs), p):
        out.append(field._pow_raw(f.coeffs[i], e) if e > 1 else f.coeffs[i])
    return Poly(field, out)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree factors with multiplicities (any field; complete
    in characteristic p via p-th-power descent)."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of zero")
    f = f.monic()
    if f.degree() == 0:
        return []
    df = f.derivative()
    result: list[tuple[Poly, int]] = []
    if df.is_zero():
        for g, m in squarefree_decomposition(_pth_root(f)):
            result.append((g, m * f.field.p))
        return result
    c = f.gcd(df)
    w = f // c
    i = 1
    while w.degree() > 0:
        y = w.gcd(c)
        fac = w // y
        if fac.degree() > 0:
            result.append((fac, i))
        w = y
        c = c // y
        i += 1
    if c.degree() > 0:
        for g, m in squarefree_decomposition(c):
            result.append((g, m * f.field.p))
    return result


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    # f monic squarefree; returns (product of degree-d factors, d)
    field = f.field
    q = field.order
    out = []
    x = Poly.x(field)
    h = x
    g = f
    d = 0
    while g.degree() >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(q, g)
        gd = g.gcd(h - x)
        if gd.degree() > 0:
            out.append((gd, d))
            g = g // gd
            h = h % g
    if g.degree() > 0:
        out.append((g, g.degree()))
    return out


def _equal_degree_split(f: Poly, d: int, rng) -> list[Poly]:
    # f monic squarefree, all factors of degree d
    field = f.field
    if f.degree() == d:
        return [f]
    q = field.order
    base_vals = list(range(field.p)) if field.base is None else None
    while True:
        deg = f.degree()
        coeffs = []
        for _ in range(deg):
            if base_vals is not None:
                coeffs.append(rng.randrange(field.p))
            else:
                # uniform raw value through the counting enumeration
                idx = rng.randrange(field.order)
                coeffs.append(_nth_element_raw(field, idx))
        r = Poly.from_elems(field, coeffs) if base_vals is not None else Poly(field, coeffs)
        if r.degree() < 1:
            continue
        g = f.gcd(r)
        if 0 < g.degree() < f.degree():
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)
        s = r.pow_mod((q**d - 1) // 2, f)
        g = f.gcd(s - 1)
        if 0 < g.degree() < f.degree():
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def _nth_element_raw(field: FiniteField, idx: int):
    if field.base is None:
        return idx % field.p
    b = field.base.order
    out = []
    for _ in range(field.modulus.degree()):
        out.append(_nth_element_raw(field.base, idx % b))
        idx //= b
    return tuple(out)


def _factor_seed(f: Poly) -> int:
    seed = f.field.order
    for part in _poly_key(f)[1]:
        seed = (seed * 1000003 + part) % (1 << 61)
    return seed


def factor_poly(f: Poly) -> list[tuple[Poly, int]]:
    """Factor a nonzero polynomial over F_q into monic irreducibles with
    multiplicities, sorted by (degree, coefficient key); the unit leading
    coefficient is dropped.  Randomized splitting is reseeded from the
    input, so results are deterministic."""
    if isinstance(f, FieldElem):
        f = _ratfun_poly_num(f)
    if not isinstance(f, Poly):
        raise TypeError("factor_poly expects a polynomial")
    if not isinstance(f.field, FiniteField):
        raise UnsupportedField("factorization is implemented over finite fields")
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    return list(_factor_poly_cached(f))


@lru_cache(maxsize=1 << 14)
def _factor_poly_cached(f: Poly) -> tuple:
    import random as _random

    rng = _random.Random(_factor_seed(f))
    out = []
    for g, mult in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree_split(h, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda pair: _poly_key(pair[0]))
    return tuple(out)


def _ratfun_poly_num(x: FieldElem) -> Poly:
    if not isinstance(x.field, RatFunField):
        raise TypeError("expected a rational function")
    num, den = x.val
    if den.degree() != 0:
        raise ValueError("not a polynomial")
    return num * den.field.elem(den.field._inv(den.coeffs[0]))


# ---------------------------------------------------------------------------
# rational function fields


class RatFunField(Field):
    """k(t): raw values are reduced pairs (num, den) of polynomials over
    the base with den monic."""

    kind = "ratfun"

    def __init__(self, base: Field, _token=None):
        if _token is not _FF_TOKEN:
            raise TypeError("use function_field()")
        self.base = base

    def _zero_raw(self):
        return (Poly(self.base, []), Poly.constant(self.base, 1))

    def _one_raw(self):
        one = Poly.constant(self.base, 1)
        return (one, one)

    def _normalize(self, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroInversion(f"division by zero in {self}")
        if num.is_zero():
            return self._zero_raw()
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
        lc_inv = self.base._inv(den.coeffs[-1])
        if den.coeffs[-1] != self.base._one_raw():
            scale = Poly.constant(self.base, FieldElem(self.base, lc_inv))
            num, den = num * scale, den * scale
        return (num, den)

    def _add(self, a, b):
        return self._normalize(a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    def _neg(self, a):
        return (-a[0], a[1])

    def _mul(self, a, b):
        return self._normalize(a[0] * b[0], a[1] * b[1])

    def _inv(self, a):
        if a[0].is_zero():
            raise ZeroInversion(f"division by zero in {self}")
        return self._normalize(a[1], a[0])

    def _format(self, a):
        num, den = a
        if den.degree() == 0:
            return repr(num)
        return f"({num!r})/({den!r})"

    @property
    def t(self) -> FieldElem:
        return FieldElem(self, (Poly.x(self.base), Poly.constant(self.base, 1)))

    def elem(self, x) -> FieldElem:
        one = Poly.constant(self.base, 1)
        if isinstance(x, FieldElem):
            if x.field is self:
                return x
            if x.field is self.base:
                return FieldElem(self, (Poly(self.base, [x.val]), one))
            raise MixedFields(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, Poly):
            if x.field is not self.base:
                raise MixedFields("polynomial over a different base field")
            return FieldElem(self, self._normalize(x, one))
        if isinstance(x, tuple) and len(x) == 2 and all(isinstance(p, Poly) for p in x):
            return FieldElem(self, self._normalize(x[0], x[1]))
        if isinstance(x, (int, Fraction)):
            return FieldElem(self, (Poly.constant(self.base, x), one))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def from_base(self, x) -> FieldElem:
        return self.elem(self.base.elem(x))

    def num_den(self, x: FieldElem) -> tuple[Poly, Poly]:
        return x.val

    def __repr__(self):
        return f"{self.base}(t)"


@lru_cache(maxsize=None)
def function_field(base: Field) -> RatFunField:
    if not isinstance(base, (FiniteField, RationalField)):
        raise UnsupportedField("function fields are built over F_q or Q")
    return RatFunField(base, _token=_FF_TOKEN)


def field_make(spec: str) -> Field:
    """Field from a compact spec string: ``Q``, ``Qt``, ``F9``, ``F7t``."""
    s = spec.strip()
    if s == "Q":
        return rationals()
    if s == "Qt":
        return function_field(rationals())
    if s.startswith("F"):
        body = s[1:]
        ratfun = body.endswith("t")
        if ratfun:
            body = body[:-1]
        if body.isdigit():
            base = finite_field(int(body))
            return function_field(base) if ratfun else base
    raise ValueError(f"unrecognized field spec {spec!r}")


# ---------------------------------------------------------------------------
# places, valuations, residues


class Place:
    """A place of Q (odd or even prime, or the real place) or of k(t)
    (monic irreducible polynomial, or degree place at infinity)."""

    __slots__ = ("field", "kind", "data")

    def __init__(self, field, kind: str, data):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Place is immutable")

    def is_finite(self) -> bool:
        return self.kind in ("prime", "poly")

    def residue_field(self) -> Field:
        if self.kind == "prime":
            return _residue_prime_field(self.data)
        if self.kind == "poly":
            pi: Poly = self.data
            if pi.degree() == 1:
                return pi.field
            if isinstance(pi.field, FiniteField):
                return extension_field(pi.field, pi)
            raise UnsupportedPlace(
                "higher-degree places over Q(t) have no residue support"
            )
        if self.kind == "inf":
            return self.field.base
        raise InfinitePlace("the real place has no residue field")

    def degree(self) -> int:
        if self.kind == "poly":
            return self.data.degree()
        if self.kind == "inf":
            return 1
        return 1

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and self.field is other.field
            and self.kind == other.kind
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.field), self.kind, self.data))

    def __repr__(self):
        if self.kind == "prime":
            return f"place({self.data})"
        if self.kind == "real":
            return "place(real)"
        if self.kind == "inf":
            return "place(inf)"
        return f"place({self.data!r})"


def rational_place(x) -> Place:
    """A place of Q: a prime number, or ``"real"`` / ``"inf"`` for the
    archimedean place."""
    qq = rationals()
    if x in ("real", "inf", "infinity"):
        return Place(qq, "real", None)
    if isinstance(x, int) and _is_prime(x):
        return Place(qq, "prime", x)
    raise ValueError(f"{x!r} is not a place of Q")


def function_place(field: RatFunField, x) -> Place:
    """A place of k(t): a monic irreducible polynomial (given as a Poly,
    a polynomial element, or coefficients), or ``"inf"``."""
    if not isinstance(field, RatFunField):
        raise TypeError("function_place needs a rational function field")
    if isinstance(x, str) and x in ("inf", "infinity"):
        return Place(field, "inf", None)
    if isinstance(x, FieldElem) and x.field is field:
        x = _ratfun_poly_num(x)
    if isinstance(x, (list, tuple)):
        x = Poly.from_elems(field.base, x)
    if not isinstance(x, Poly) or x.field is not field.base:
        raise TypeError(f"cannot interpret {x!r} as a place of {field}")
    if x.degree() < 1:
        raise ZeroArgument("a finite place needs a nonconstant polynomial")
    x = x.monic()
    if isinstance(field.base, FiniteField):
        if not poly_is_irreducible(x):
            raise NonIrreducibleModulus(f"{x!r} is reducible")
    else:
        if x.degree() > 1:
            raise UnsupportedPlace(
                "over Q(t) only degree-one places are supported"
            )
    return Place(field, "poly", x)


def _as_place(field: Field, place) -> Place:
    if isinstance(place, Place):
        return place
    if isinstance(field, RationalField):
        return rational_place(place)
    if isinstance(field, RatFunField):
        return function_place(field, place)
    raise TypeError(f"{field} has no places")


def _poly_valuation(f: Poly, pi: Poly) -> tuple[int, Poly]:
    v = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return v, f
        f = q
        v += 1


def _residue_of_poly(g: Poly, place: Place) -> FieldElem:
    pi: Poly = place.data
    kappa = place.residue_field()
    if pi.degree() == 1:
        root = pi.field._neg(pi.coeffs[0])  # pi = t - root, monic
        return g.eval(FieldElem(pi.field, root))
    rem = g % pi
    coeffs = list(rem.coeffs)
    return FieldElem(kappa, kappa._pad(coeffs))


def valuation(f: FieldElem, place) -> tuple[int, FieldElem]:
    """Order of vanishing of a nonzero rational function at a place,
    together with the residue of its unit part."""
    if not isinstance(f.field, RatFunField):
        raise UnsupportedField("valuations are defined on rational function fields")
    field: RatFunField = f.field
    if not f:
        raise ZeroArgument("valuation of zero")
    place = _as_place(field, place)
    return _valuation_cached(f, place)


@lru_cache(maxsize=1 << 16)
def _valuation_cached(f: FieldElem, place: "Place") -> tuple[int, FieldElem]:
    field: RatFunField = f.field
    num, den = f.val
    if place.kind == "inf":
        v = den.degree() - num.degree()
        res = num.lc() / den.lc()
        return v, res
    if place.kind != "poly":
        raise UnsupportedPlace(f"{place!r} is not a place of {field}")
    pi = place.data
    vn, num_u = _poly_valuation(num, pi)
    vd, den_u = _poly_valuation(den, pi)
    res = _residue_of_poly(num_u, place) / _residue_of_poly(den_u, place)
    return vn - vd, res


def rational_valuation(x, p: int) -> tuple[int, Fraction]:
    """p-adic valuation of a nonzero rational and its unit part."""
    x = Fraction(x)
    if not x:
        raise ZeroArgument("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _frac_mod(x: Fraction, p: int) -> int:
    den = x.denominator % p
    if den == 0:
        raise ZeroInversion(f"denominator divisible by {p}")
    return (x.numerator % p) * pow(den, -1, p) % p


# ---------------------------------------------------------------------------
# square classes


class SquareClass:
    """Canonical key for an element of k^x / (k^x)^2.

    Keys: one bit over a finite field; (sign bit, positive squarefree
    integer) over Q; (base-class key, monic squarefree polynomial
    coefficients) over k(t).  Products of keys stay canonical, and a
    finite place divides a key with multiplicity at most one."""

    __slots__ = ("field", "key")

    def __init__(self, field: Field, key):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "key", key)

    def __setattr__(self, name, value):
        raise AttributeError("SquareClass is immutable")

    def is_trivial(self) -> bool:
        return self.key == _trivial_key(self.field)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if not isinstance(other, SquareClass):
            return NotImplemented
        if other.field is not self.field:
            raise MixedFields("square classes over different fields")
        return SquareClass(self.field, _key_mul(self.field, self.key, other.key))

    def rep(self) -> FieldElem:
        """Canonical representative element of the class."""
        return _key_rep(self.field, self.key)

    def __eq__(self, other):
        return (
            isinstance(other, SquareClass)
            and self.field is other.field
            and self.key == other.key
        )

    def __hash__(self):
        return hash((id(self.field), self.key))

    def __repr__(self):
        return f"cls({self.rep()!r})"


def _trivial_key(field: Field):
    if isinstance(field, FiniteField):
        return 0
    if isinstance(field, RationalField):
        return (0, 1)
    if isinstance(field, RatFunField):
        return (_trivial_key(field.base), (field.base._one_raw(),))
    raise UnsupportedField(f"no square classes over {field}")


def _key_mul(field: Field, k1, k2):
    if isinstance(field, FiniteField):
        return k1 ^ k2
    if isinstance(field, RationalField):
        s1, n1 = k1
        s2, n2 = k2
        g = int_gcd(n1, n2)
        return (s1 ^ s2, (n1 // g) * (n2 // g))
    if isinstance(field, RatFunField):
        b1, c1 = k1
        b2, c2 = k2
        base = field.base
        f1, f2 = Poly(base, c1), Poly(base, c2)
        g = f1.gcd(f2)
        prod = (f1 // g) * (f2 // g)
        return (_key_mul(base, b1, b2), prod.coeffs or (base._one_raw(),))
    raise UnsupportedField(f"no square classes over {field}")


def _key_rep(field: Field, key) -> FieldElem:
    if isinstance(field, FiniteField):
        return field.one if key == 0 else field.nonsquare()
    if isinstance(field, RationalField):
        s, n = key
        return field.elem(-n if s else n)
    if isinstance(field, RatFunField):
        b, c = key
        base_rep = _key_rep(field.base, b)
        poly = Poly(field.base, c)
        scaled = poly * Poly(field.base, [base_rep.val])
        return field.elem(scaled)
    raise UnsupportedField(f"no square classes over {field}")


def square_class(x: FieldElem) -> SquareClass:
    """The class of a nonzero element in k^x/(k^x)^2."""
    if not isinstance(x, FieldElem):
        raise TypeError("square_class expects a field element")
    field = x.field
    if not x:
        raise ZeroArgument("square class of zero")
    if isinstance(field, FiniteField):
        return SquareClass(field, 0 if field.is_square_raw(x.val) else 1)
    if isinstance(field, RationalField):
        fr: Fraction = x.val
        n = fr.numerator * fr.denominator
        return SquareClass(field, (1 if n < 0 else 0, squarefree_part(n)))
    if isinstance(field, RatFunField):
        num, den = x.val
        g = num * den  # same class as num/den
        base = field.base
        lc = g.lc()
        monic = g.monic()
        if isinstance(base, FiniteField):
            sf = Poly.constant(base, 1)
            for irr, mult in factor_poly(monic):
                if mult % 2:
                    sf = sf * irr
            base_key = 0 if base.is_square_raw(lc.val) else 1
        else:
            sf = Poly.constant(base, 1)
            for fac, mult in squarefree_decomposition(monic):
                if mult % 2:
                    sf = sf * fac
            fr = lc.val
            n = fr.numerator * fr.denominator
            base_key = (1 if n < 0 else 0, squarefree_part(n))
        return SquareClass(field, (base_key, sf.coeffs or (base._one_raw(),)))
    raise UnsupportedField(f"no square classes over {field}")


def is_square(x: FieldElem) -> bool:
    return square_class(x).is_trivial()


def class_place_parity(cls: SquareClass, place: Place) -> int:
    """v_place of the canonical key, always 0 or 1."""
    field = cls.field
    if isinstance(field, RatFunField):
        if place.kind == "poly":
            _, c = cls.key
            poly = Poly(field.base, c)
            return 1 if (poly % place.data).is_zero() and poly.degree() >= 1 else 0
        if place.kind == "inf":
            _, c = cls.key
            return (len(c) - 1) % 2
    if isinstance(field, RationalField) and place.kind == "prime":
        _, n = cls.key
        return 1 if n % place.data == 0 else 0
    raise UnsupportedPlace(f"no parity of {cls!r} at {place!r}")


# ---------------------------------------------------------------------------
# symbols


def legendre(a, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p: 0 on p-divisible a, else
    +-1 by Euler's criterion."""
    if not isinstance(p, int) or not _is_prime(p):
        raise ValueError(f"{p!r} is not prime")
    if p == 2:
        raise EvenPrimeForLegendre("Legendre symbols need an odd prime")
    if isinstance(a, FieldElem):
        if not isinstance(a.field, RationalField):
            raise TypeError("legendre expects a rational number")
        a = a.val
    a = Fraction(a)
    if not a:
        raise ZeroArgument("Legendre symbol of zero")
    v, unit = rational_valuation(a, p)
    if v < 0:
        raise ZeroArgument(f"{a} is not a {p}-adic integer")
    if v > 0:
        return 0
    r = pow(_frac_mod(unit, p), (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _eps(u: int) -> int:
    # (u - 1)/2 mod 2 for odd u
    return ((u % 8) - 1) // 2 % 2


def _omega(u: int) -> int:
    # (u^2 - 1)/8 mod 2 for odd u
    return 0 if u % 8 in (1, 7) else 1


@lru_cache(maxsize=1 << 16)
def tame_symbol(a, b, place) -> FieldElem:
    """Tame symbol (-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)} reduced at a finite
    place; the result lives in the residue field."""
    if isinstance(a, FieldElem):
        field = a.field
    elif isinstance(b, FieldElem):
        field = b.field
    else:
        field = rationals()
    if isinstance(field, RationalField):
        place = _as_place(field, place)
        if place.kind == "real":
            raise InfinitePlace("no tame symbol at the real place")
        p = place.data
        a, b = Fraction(a if not isinstance(a, FieldElem) else a.val), Fraction(
            b if not isinstance(b, FieldElem) else b.val
        )
        if not a or not b:
            raise ZeroArgument("tame symbol needs nonzero arguments")
        kappa = place.residue_field()
        va, ua = rational_valuation(a, p)
        vb, ub = rational_valuation(b, p)
        sign = -1 if (va * vb) % 2 else 1
        value = Fraction(sign) * ua**vb / ub**va
        return kappa.elem(_frac_mod(value, p))
    if isinstance(field, RatFunField):
        place = _as_place(field, place)
        a = field.elem(a) if not isinstance(a, FieldElem) else a
        b = field.elem(b) if not isinstance(b, FieldElem) else b
        if a.field is not field or b.field is not field:
            raise MixedFields("tame symbol arguments over different fields")
        if not a or not b:
            raise ZeroArgument("tame symbol needs nonzero arguments")
        va, ra = valuation(a, place)
        vb, rb = valuation(b, place)
        kappa = ra.field
        sign = kappa.one if (va * vb) % 2 == 0 else -kappa.one
        return sign * ra**vb * rb ** (-va)
    raise UnsupportedField(f"no tame symbols over {field}")


@lru_cache(maxsize=1 << 16)
def hilbert(a, b, place) -> int:
    """Hilbert symbol (a, b) at a place of Q or of F_q(t); returns +-1."""
    if isinstance(a, FieldElem) and isinstance(a.field, RatFunField):
        field = a.field
    elif isinstance(b, FieldElem) and isinstance(b.field, RatFunField):
        field = b.field
    else:
        field = rationals()

    if isinstance(field, RatFunField):
        if not isinstance(field.base, FiniteField):
            raise UnsupportedField("Hilbert symbols over Q(t) are not supported")
        place = _as_place(field, place)
        val = tame_symbol(a, b, place)
        kappa = val.field
        return 1 if kappa.is_square_raw(val.val) else -1

    place = _as_place(field, place)
    a = Fraction(a.val if isinstance(a, FieldElem) else a)
    b = Fraction(b.val if isinstance(b, FieldElem) else b)
    if not a or not b:
        raise ZeroArgument("Hilbert symbol needs nonzero arguments")
    if place.kind == "real":
        return -1 if a < 0 and b < 0 else 1
    p = place.data
    if p == 2:
        alpha, u = rational_valuation(a, 2)
        beta, w = rational_valuation(b, 2)
        um = _frac_mod(u, 8)
        wm = _frac_mod(w, 8)
        exp = _eps(um) * _eps(wm) + alpha * _omega(wm) + beta * _omega(um)
        return -1 if exp % 2 else 1
    val = tame_symbol(a, b, place)
    kappa = val.field
    r = pow(val.val, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def support_places(field: Field, elems: Iterable) -> list[Place]:
    """Finite places where any of the given nonzero elements could be a
    non-unit, plus the archimedean / infinite place.  Over Q this means
    2, the odd primes dividing a numerator or denominator, and the real
    place; over F_q(t) the monic irreducible divisors and infinity."""
    if isinstance(field, RationalField):
        primes = {2}
        for x in elems:
            fr = Fraction(x.val if isinstance(x, FieldElem) else x)
            if not fr:
                raise ZeroArgument("support of zero")
            for n in (fr.numerator, fr.denominator):
                for p, _ in factor_int(abs(n)):
                    primes.add(p)
        out = [rational_place("real")]
        out.extend(rational_place(p) for p in sorted(primes))
        return out
    if isinstance(field, RatFunField) and isinstance(field.base, FiniteField):
        polys = {}
        for x in elems:
            x = field.elem(x) if not isinstance(x, FieldElem) else x
            if not x:
                raise ZeroArgument("support of zero")
            num, den = x.val
            for part in (num, den):
                if part.degree() >= 1:
                    for irr, _ in factor_poly(part.monic()):
                        polys[_poly_key(irr)] = irr
        out = [function_place(field, "inf")]
        out.extend(function_place(field, polys[k]) for k in sorted(polys))
        return out
    raise UnsupportedField(f"no place enumeration over {field}")


# ---------------------------------------------------------------------------
# element parsing


def parse_elem(field: Field, text: str) -> FieldElem:
    """Parse a field element: integers and fractions everywhere,
    polynomial expressions in t (with +, -, *, /, ^ and parentheses)
    over rational function fields."""
    tokens = _tokenize(text)
    elem, pos = _parse_expr(field, tokens, 0)
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return elem


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        elif c in "+-*/^()t":
            out.append(c)
            i += 1
        else:
            raise ValueError(f"unexpected character {c!r}")
    return out


def _parse_expr(field, toks, pos):
    elem, pos = _parse_term(field, toks, pos)
    while pos < len(toks) and toks[pos] in "+-":
        op = toks[pos]
        rhs, pos = _parse_term(field, toks, pos + 1)
        elem = elem + rhs if op == "+" else elem - rhs
    return elem, pos


def _parse_term(field, toks, pos):
    elem, pos = _parse_factor(field, toks, pos)
    while pos < len(toks) and toks[pos] in "*/":
        op = toks[pos]
        rhs, pos = _parse_factor(field, toks, pos + 1)
        elem = elem * rhs if op == "*" else elem / rhs
    return elem, pos


def _parse_factor(field, toks, pos):
    neg = False
    while pos < len(toks) and toks[pos] in "+-":
        if toks[pos] == "-":
            neg = not neg
        pos += 1
    elem, pos = _parse_atom(field, toks, pos)
    if pos < len(toks) and toks[pos] == "^":
        if pos + 1 >= len(toks) or not toks[pos + 1].isdigit():
            raise ValueError("exponent must be a literal integer")
        elem = elem ** int(toks[pos + 1])
        pos += 2
    return (-elem if neg else elem), pos


def _parse_atom(field, toks, pos):
    if pos >= len(toks):
        raise ValueError("unexpected end of input")
    tok = toks[pos]
    if tok == "(":
        elem, pos = _parse_expr(field, toks, pos + 1)
        if pos >= len(toks) or toks[pos] != ")":
            raise ValueError("unbalanced parentheses")
        return elem, pos + 1
    if tok == "t":
        if not isinstance(field, RatFunField):
            raise ValueError(f"no variable t in {field}")
        return field.t, pos + 1
    if tok.isdigit():
        return field.elem(int(tok)), pos + 1
    raise ValueError(f"unexpected token {tok!r}")
