"""The integral group ring Z[k^x / (k^x)^2].

Elements are finite integer combinations of square classes; over a
finite field the group has order two, so the ring is Z[s]/(s^2 - 1) and
elements flatten to coefficient pairs.  The forms ⟪a⟫ = ⟨a⟩ - 1 satisfy
⟪ab⟫ = ⟪a⟫ + ⟪b⟫ + ⟪a⟫⟪b⟫, and products of two of them land in the
square of the augmentation ideal.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import MixedFields, ZeroArgument
from .fields import Field, FieldElem, SquareClass, square_class


class GroupRingElem:
    """Z-linear combination of square classes of a fixed field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Mapping[SquareClass, int]):
        clean = {}
        for cls, c in coeffs.items():
            if cls.field is not field:
                raise MixedFields("square class over a different field")
            if c:
                clean[cls] = int(c)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GroupRingElem is immutable")

    def _coerce(self, other) -> "GroupRingElem":
        if isinstance(other, GroupRingElem):
            if other.field is not self.field:
                raise MixedFields("group ring elements over different fields")
            return other
        if isinstance(other, int):
            return gr_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for cls, c in o.coeffs.items():
            out[cls] = out.get(cls, 0) + c
        return GroupRingElem(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.field, {cls: -c for cls, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(
                self.field, {cls: c * other for cls, c in self.coeffs.items()}
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[SquareClass, int] = {}
        for c1, a in self.coeffs.items():
            for c2, b in o.coeffs.items():
                key = c1 * c2
                out[key] = out.get(key, 0) + a * b
        return GroupRingElem(self.field, out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = gr_int(self.field, other)
        return (
            isinstance(other, GroupRingElem)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), frozenset(self.coeffs.items())))

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def in_augmentation_ideal(self) -> bool:
        return self.augmentation() == 0

    def in_augmentation_square(self) -> bool:
        """Membership in Aug^2: zero augmentation and trivial class
        product (for the order-two class group this is the classical
        even-coefficient test)."""
        if self.augmentation() != 0:
            return False
        prod = _trivial_class(self.field)
        for cls, c in self.coeffs.items():
            if c % 2:
                prod = prod * cls
        return prod.is_trivial()

    def to_pair(self) -> tuple[int, int]:
        """Coefficients (on 1, on the nonsquare class) over a finite
        field, where the class group is {1, s}."""
        from .fields import FiniteField

        if not isinstance(self.field, FiniteField):
            raise MixedFields("coefficient pairs need a finite base field")
        c1 = cs = 0
        for cls, c in self.coeffs.items():
            if cls.is_trivial():
                c1 = c
            else:
                cs = c
        return c1, cs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for cls, c in sorted(self.coeffs.items(), key=lambda kv: repr(kv[0])):
            tag = f"<{cls.rep()!r}>"
            if c == 1:
                parts.append(tag)
            elif c == -1:
                parts.append(f"-{tag}")
            else:
                parts.append(f"{c}*{tag}")
        return " + ".join(parts).replace("+ -", "- ")


def _trivial_class(field: Field) -> SquareClass:
    from .fields import _trivial_key

    return SquareClass(field, _trivial_key(field))


def gr_zero(field: Field) -> GroupRingElem:
    return GroupRingElem(field, {})


def gr_int(field: Field, n: int) -> GroupRingElem:
    return GroupRingElem(field, {_trivial_class(field): n})


def gr_unit(field: Field, a) -> GroupRingElem:
    """The basis element ⟨a⟩ for a nonzero field element a."""
    a = field.elem(a) if not isinstance(a, FieldElem) else a
    if a.field is not field:
        raise MixedFields("unit from a different field")
    if not a:
        raise ZeroArgument("no square class of zero")
    return GroupRingElem(field, {square_class(a): 1})


def gr_class(cls: SquareClass) -> GroupRingElem:
    return GroupRingElem(cls.field, {cls: 1})


def gr_add(x: GroupRingElem, y: GroupRingElem) -> GroupRingElem:
    return x + y


def gr_mul(x: GroupRingElem, y: GroupRingElem) -> GroupRingElem:
    return x * y


def augmentation(x: GroupRingElem) -> int:
    return x.augmentation()


def pfister_elem(field: Field, slots: Iterable) -> GroupRingElem:
    """The product of the forms ⟪a⟫ = ⟨a⟩ - 1 over the given nonzero
    slots."""
    out = gr_int(field, 1)
    for a in slots:
        out = out * (gr_unit(field, a) - gr_int(field, 1))
    return out
