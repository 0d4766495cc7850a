"""Milnor-Witt K-theory in degrees 0-3 via the fiber-product model.

Elements are integer combinations of monomials ``eta^k [a_1]...[a_m]``
with ``m - k`` equal to the degree.  Alongside the formal monomials,
every element of degree at most 2 over a supported field carries a
normalized pair (Milnor coordinates, virtual form) living in the fiber
product of Milnor K-theory with the matching power of the fundamental
ideal; the two components are checked for mod-2 compatibility whenever
a pair is built, and equality of elements is decided componentwise on
the pairs.

Degree-3 elements stay formal: they have no equality oracle and are
consumed by ``eta_mul``, which lowers them into testable degree 2.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .descriptor import GroupDescriptor, Provenance
from .errors import (
    BadBound,
    DegreeOverflow,
    IntegrityFailure,
    KmwError,
    MixedFields,
    UnsupportedDegree,
    UnsupportedField,
    UnsupportedPlace,
    ZeroArgument,
)
from .fields import (
    FieldElem,
    FiniteField,
    Poly,
    RatFunField,
    RationalField,
    _poly_key,
    finite_field,
    parse_elem,
    square_class,
    support_places,
    tame_symbol,
)
from .witt import (
    VirtualForm,
    _ehat_matches_hyperbolic,
    _rep_elems,
    _signed_disc,
    in_i_power,
    pfister_form,
    second_residue,
    signature,
    unit_form,
    witt_equal,
    witt_is_zero,
    zero_form,
)
from .fields import hilbert


Monomial = Tuple[int, Tuple[FieldElem, ...]]


def _field_kind(field) -> str:
    if isinstance(field, FiniteField):
        return "finite"
    if isinstance(field, RationalField):
        return "rational"
    if isinstance(field, RatFunField):
        return "ratfun-finite" if isinstance(field.base, FiniteField) else "ratfun-rational"
    return "other"


class MilnorCoords:
    """Complete coordinates of the Milnor component, by degree.

    Degree 0 holds an integer (K_0), degree 1 a unit of the field
    (K_1), degree 2 a finite fingerprint of symbols: over the rationals
    the 2-adic and real Hilbert symbols together with tame symbols at
    odd primes; over a rational function field with finite base the
    tame symbols at monic irreducible places; over a finite field
    nothing (K_2 vanishes there).
    """

    __slots__ = ("field", "degree", "data")

    def __init__(self, field, degree: int, data):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("MilnorCoords is immutable")

    def __eq__(self, other):
        if not isinstance(other, MilnorCoords):
            return NotImplemented
        return (
            self.field is other.field
            and self.degree == other.degree
            and self.data == other.data
        )

    def is_trivial(self) -> bool:
        if self.degree == 0:
            return self.data == 0
        if self.degree == 1:
            return self.data == self.field.one
        if self.degree == 2:
            kind = _field_kind(self.field)
            if kind == "finite":
                return True
            if kind == "rational":
                two_adic, infinite, tame = self.data
                return two_adic == 1 and infinite == 1 and not tame
            return not self.data
        raise UnsupportedDegree("no normal form in degree 3")

    def __repr__(self):
        return f"MilnorCoords(degree={self.degree}, data={self.data!r})"


def _k0_coords(field, monomials: Dict[Monomial, int]) -> MilnorCoords:
    total = sum(c for (k, syms), c in monomials.items() if k == 0)
    return MilnorCoords(field, 0, total)


def _k1_coords(field, monomials: Dict[Monomial, int]) -> MilnorCoords:
    acc = field.one
    for (k, syms), c in monomials.items():
        if k == 0:
            acc = acc * syms[0] ** c
    return MilnorCoords(field, 1, acc)


def _k2_coords(field, monomials: Dict[Monomial, int]) -> MilnorCoords:
    kind = _field_kind(field)
    pairs = [(syms, c) for (k, syms), c in monomials.items() if k == 0]
    if kind == "finite":
        return MilnorCoords(field, 2, None)
    if kind == "rational":
        two_adic = 1
        infinite = 1
        tame: Dict[int, FieldElem] = {}
        for (a, b), c in pairs:
            two_adic *= hilbert(a, b, 2) ** c
            infinite *= hilbert(a, b, "real") ** c
            for place in support_places(field, [a, b]):
                if place.kind != "prime" or place.data == 2:
                    continue
                p = place.data
                val = tame_symbol(a, b, place) ** c
                tame[p] = tame[p] * val if p in tame else val
        cleaned = tuple(
            (p, tame[p]) for p in sorted(tame) if tame[p] != finite_field(p).one
        )
        return MilnorCoords(field, 2, (two_adic, infinite, cleaned))
    if kind == "ratfun-finite":
        tame_places: Dict[object, FieldElem] = {}
        for (a, b), c in pairs:
            for place in support_places(field, [a, b]):
                if place.kind != "poly":
                    continue
                val = tame_symbol(a, b, place) ** c
                tame_places[place] = (
                    tame_places[place] * val if place in tame_places else val
                )
        cleaned = tuple(
            (place, tame_places[place])
            for place in sorted(
                tame_places, key=lambda pl: (pl.data.degree(), _poly_key(pl.data))
            )
            if tame_places[place] != place.residue_field().one
        )
        return MilnorCoords(field, 2, cleaned)
    raise UnsupportedField("no degree-2 Milnor coordinates for this field")


def _milnor_coords(field, degree: int, monomials: Dict[Monomial, int]) -> MilnorCoords:
    if degree == 0:
        return _k0_coords(field, monomials)
    if degree == 1:
        return _k1_coords(field, monomials)
    if degree == 2:
        return _k2_coords(field, monomials)
    raise UnsupportedDegree("no normal form in degree 3")


def _witt_component(field, monomials: Dict[Monomial, int]) -> VirtualForm:
    total = zero_form(field)
    for (k, syms), c in monomials.items():
        total = total + c * pfister_form(field, syms)
    return total


class MWElem:
    """Milnor-Witt K-theory element: formal monomials plus, in degrees
    0-2 over supported fields, the validated fiber-product pair."""

    __slots__ = ("field", "degree", "monomials", "milnor", "witt")

    def __init__(
        self,
        field,
        degree: int,
        monomials: Optional[Dict[Monomial, int]],
        milnor: Optional[MilnorCoords] = None,
        witt: Optional[VirtualForm] = None,
    ):
        if degree not in (0, 1, 2, 3):
            raise DegreeOverflow("degrees are restricted to 0..3")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "monomials", monomials)
        object.__setattr__(self, "milnor", milnor)
        object.__setattr__(self, "witt", witt)

    def __setattr__(self, name, value):
        raise AttributeError("MWElem is immutable")

    def has_pair(self) -> bool:
        return self.milnor is not None

    def pair(self) -> Tuple[MilnorCoords, VirtualForm]:
        if self.milnor is None:
            if self.degree == 3:
                raise UnsupportedDegree("degree-3 elements have no normal form")
            raise UnsupportedField("no normalized pair over this field")
        return self.milnor, self.witt

    # arithmetic lives in module functions; operators delegate
    def __add__(self, other):
        if not isinstance(other, MWElem):
            return NotImplemented
        return mw_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, MWElem):
            return NotImplemented
        return mw_add(self, mw_neg(other))

    def __neg__(self):
        return mw_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return mw_scale(self, other)
        if isinstance(other, MWElem):
            return mw_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return mw_scale(self, other)
        return NotImplemented

    def __repr__(self):
        if self.monomials is None:
            return f"MWElem(degree={self.degree}, pair-backed)"
        return f"MWElem({format_mw(self)!r})"


def _pair_supported(field) -> bool:
    return _field_kind(field) in ("finite", "rational", "ratfun-finite")


def _check_fiber(field, degree: int, monomials: Dict[Monomial, int],
                 milnor: MilnorCoords, witt: VirtualForm):
    """Mod-2 agreement of the two fiber components, checked on every
    construction."""
    kind = _field_kind(field)
    if degree == 0:
        if (milnor.data - witt.rank()) % 2:
            raise IntegrityFailure("rank parity disagrees with the K_0 part")
        return
    if not in_i_power(witt, degree):
        raise IntegrityFailure("witt component escapes the expected ideal power")
    if degree == 1:
        if square_class(milnor.data) != _signed_disc(field, witt.diag_rep()):
            raise IntegrityFailure("K_1 square class disagrees with the discriminant")
        return
    # degree 2: compare local mod-2 symbol data at every relevant place
    if kind == "finite":
        if not witt_is_zero(witt):
            raise IntegrityFailure("degree-2 form over a finite field must vanish")
        return
    pairs = [(syms, c) for (k, syms), c in monomials.items() if k == 0]
    support: List = []
    seen = set()
    gather: List[FieldElem] = []
    for (a, b), _ in pairs:
        gather.extend([a, b])
    rep_elems = _rep_elems(witt.diag_rep())
    gather.extend(rep_elems)
    if gather:
        for place in support_places(field, gather):
            if place not in seen:
                seen.add(place)
                support.append(place)
    for place in support:
        milnor_side = 1
        for (a, b), c in pairs:
            milnor_side *= hilbert(a, b, place) ** c
        witt_side = 1 if _ehat_matches_hyperbolic(field, rep_elems, place) else -1
        if milnor_side != witt_side:
            raise IntegrityFailure(
                "local symbol data of the two fiber components disagree"
            )


def _make(field, degree: int, monomials: Dict[Monomial, int]) -> MWElem:
    clean: Dict[Monomial, int] = {}
    for (k, syms), c in monomials.items():
        if not c:
            continue
        if len(syms) - k != degree:
            raise DegreeOverflow("monomial degree does not match the element degree")
        clean[(k, syms)] = c
    if degree <= 2 and _pair_supported(field):
        milnor = _milnor_coords(field, degree, clean)
        witt = _witt_component(field, clean)
        _check_fiber(field, degree, clean, milnor, witt)
        return MWElem(field, degree, clean, milnor, witt)
    return MWElem(field, degree, clean)


def mw_zero(field, degree: int) -> MWElem:
    return _make(field, degree, {})


def mw_one(field) -> MWElem:
    """The unit of the graded ring: the empty symbol in degree 0."""
    return _make(field, 0, {(0, ()): 1})


def mw_symbol(field, entries: Sequence) -> MWElem:
    """Generator monomial ``[a_1]...[a_n]`` in degree n <= 3."""
    elems = []
    for x in entries:
        e = field.elem(x)
        if not e:
            raise ZeroArgument("symbol entries must be nonzero")
        elems.append(e)
    if len(elems) > 3:
        raise DegreeOverflow("symbols have at most three entries")
    return _make(field, len(elems), {(0, tuple(elems)): 1})


def h_elem(field) -> MWElem:
    """The hyperbolic element ``h = 2 + eta [-1]`` in degree 0."""
    return _make(field, 0, {(0, ()): 2, (1, (field.elem(-1),)): 1})


def _require_same(x: MWElem, y: MWElem):
    if x.field is not y.field:
        raise MixedFields("elements live over different fields")
    if x.degree != y.degree:
        raise DegreeOverflow("elements have different degrees")


def mw_add(x: MWElem, y: MWElem) -> MWElem:
    _require_same(x, y)
    if x.monomials is not None and y.monomials is not None:
        out = dict(x.monomials)
        for mono, c in y.monomials.items():
            out[mono] = out.get(mono, 0) + c
        return _make(x.field, x.degree, out)
    # pair-backed addition
    xm, xw = x.pair()
    ym, yw = y.pair()
    return _pair_elem(x.field, x.degree, _coords_add(xm, ym), xw + yw)


def mw_neg(x: MWElem) -> MWElem:
    if x.monomials is not None:
        return _make(x.field, x.degree, {m: -c for m, c in x.monomials.items()})
    m, w = x.pair()
    return _pair_elem(x.field, x.degree, _coords_neg(m), -w)


def mw_scale(x: MWElem, c: int) -> MWElem:
    if x.monomials is not None:
        return _make(x.field, x.degree, {m: c * v for m, v in x.monomials.items()})
    if c == 0:
        return mw_zero(x.field, x.degree)
    step = x if c > 0 else mw_neg(x)
    acc = step
    for _ in range(abs(c) - 1):
        acc = mw_add(acc, step)
    return acc


def mw_mul(x: MWElem, y: MWElem) -> MWElem:
    if x.field is not y.field:
        raise MixedFields("elements live over different fields")
    if x.monomials is None or y.monomials is None:
        raise UnsupportedDegree("products require monomial-backed elements")
    degree = x.degree + y.degree
    if degree > 3:
        raise DegreeOverflow("product degree exceeds 3")
    out: Dict[Monomial, int] = {}
    for (k1, s1), c1 in x.monomials.items():
        for (k2, s2), c2 in y.monomials.items():
            mono = (k1 + k2, s1 + s2)
            out[mono] = out.get(mono, 0) + c1 * c2
    return _make(x.field, degree, out)


def eta_mul(x: MWElem) -> MWElem:
    """Multiplication by eta: lowers the degree by one."""
    if x.degree == 0:
        raise DegreeOverflow("eta would leave the supported degree range")
    if x.monomials is not None:
        out: Dict[Monomial, int] = {}
        for (k, syms), c in x.monomials.items():
            out[(k + 1, syms)] = out.get((k + 1, syms), 0) + c
        return _make(x.field, x.degree - 1, out)
    m, w = x.pair()
    return _pair_elem(x.field, x.degree - 1, _trivial_coords(x.field, x.degree - 1), w)


def gw_scale(x: MWElem, u) -> MWElem:
    """Action of the rank-one class ``<u>``: ``x + eta [u] x``."""
    e = x.field.elem(u)
    if not e:
        raise ZeroArgument("the scaling unit must be nonzero")
    if x.monomials is not None:
        out = dict(x.monomials)
        for (k, syms), c in x.monomials.items():
            mono = (k + 1, (e,) + syms)
            out[mono] = out.get(mono, 0) + c
        return _make(x.field, x.degree, out)
    m, w = x.pair()
    return _pair_elem(x.field, x.degree, m, unit_form(x.field, e) * w)


# -- pair-backed construction ------------------------------------------


def _trivial_coords(field, degree: int) -> MilnorCoords:
    if degree == 0:
        return MilnorCoords(field, 0, 0)
    if degree == 1:
        return MilnorCoords(field, 1, field.one)
    if degree == 2:
        kind = _field_kind(field)
        if kind == "finite":
            return MilnorCoords(field, 2, None)
        if kind == "rational":
            return MilnorCoords(field, 2, (1, 1, ()))
        return MilnorCoords(field, 2, ())
    raise UnsupportedDegree("no coordinates in degree 3")


def _coords_add(a: MilnorCoords, b: MilnorCoords) -> MilnorCoords:
    if a.field is not b.field or a.degree != b.degree:
        raise MixedFields("coordinate mismatch")
    if a.degree == 0:
        return MilnorCoords(a.field, 0, a.data + b.data)
    if a.degree == 1:
        return MilnorCoords(a.field, 1, a.data * b.data)
    raise UnsupportedDegree("pair-backed addition is limited to degrees 0-1")


def _coords_neg(a: MilnorCoords) -> MilnorCoords:
    if a.degree == 0:
        return MilnorCoords(a.field, 0, -a.data)
    if a.degree == 1:
        return MilnorCoords(a.field, 1, a.data ** -1)
    raise UnsupportedDegree("pair-backed negation is limited to degrees 0-1")


def _pair_elem(field, degree: int, milnor: MilnorCoords, witt: VirtualForm) -> MWElem:
    # pair-backed elements re-run the scalar fiber checks directly
    if degree == 0:
        if (milnor.data - witt.rank()) % 2:
            raise IntegrityFailure("rank parity disagrees with the K_0 part")
    elif degree == 1:
        if not in_i_power(witt, 1):
            raise IntegrityFailure("witt component escapes the fundamental ideal")
        if square_class(milnor.data) != _signed_disc(field, witt.diag_rep()):
            raise IntegrityFailure("K_1 square class disagrees with the discriminant")
    return MWElem(field, degree, None, milnor, witt)


# -- equality -----------------------------------------------------------


def mw_equal(x: MWElem, y: MWElem) -> bool:
    """Componentwise equality on normalized pairs (degrees 0-2)."""
    if x.field is not y.field:
        raise MixedFields("elements live over different fields")
    if x.degree != y.degree:
        raise UnsupportedDegree("elements have different degrees")
    if x.degree == 3:
        raise UnsupportedDegree("no equality oracle in degree 3")
    if not _pair_supported(x.field):
        raise UnsupportedField("no equality oracle over this field")
    xm, xw = x.pair()
    ym, yw = y.pair()
    return xm == ym and witt_equal(xw, yw)


def mw_is_zero(x: MWElem) -> bool:
    return mw_equal(x, mw_zero(x.field, x.degree))


def mw_witt_part(x: MWElem) -> VirtualForm:
    """The virtual-form component, available for monomial-backed
    elements over any field (formal pfister expansion)."""
    if x.witt is not None:
        return x.witt
    if x.monomials is None:
        raise UnsupportedField("element has no witt component")
    return _witt_component(x.field, x.monomials)


# -- residue ------------------------------------------------------------


def mw_delta(x: MWElem, place) -> MWElem:
    """Residue map at a monic irreducible place of k(t), from degree 2
    to degree 1 over the residue field: tame symbol on the Milnor
    component, second residue on the witt component."""
    field = x.field
    if not isinstance(field, RatFunField):
        raise UnsupportedField("residues require a rational function field")
    if x.degree != 2:
        raise UnsupportedDegree("the residue is computed from degree 2")
    if x.monomials is None:
        raise UnsupportedDegree("the residue consumes monomial-backed elements")
    from .fields import _as_place

    place = _as_place(field, place)
    if place.kind != "poly":
        raise UnsupportedPlace("residues are taken at finite places")
    kappa = place.residue_field()
    acc = kappa.one
    for (k, syms), c in x.monomials.items():
        if k == 0:
            a, b = syms
            acc = acc * tame_symbol(a, b, place) ** c
    witt_part = second_residue(_witt_component(field, x.monomials), place)
    return _pair_elem(kappa, 1, MilnorCoords(kappa, 1, acc), witt_part)


def t_sigma(x: MWElem) -> int:
    """Signature homomorphism on degree 2 over the rationals,
    normalized so the square of the class of -1 maps to 1."""
    if not isinstance(x.field, RationalField):
        raise UnsupportedField("the signature map is defined over the rationals")
    if x.degree != 2:
        raise UnsupportedDegree("the signature map consumes degree-2 elements")
    if x.monomials is not None:
        witt = _witt_component(x.field, x.monomials)
    else:
        witt = x.pair()[1]
    return signature(witt) // 4


# -- structure descriptors ---------------------------------------------


def _primes_upto(bound: int) -> List[int]:
    sieve = [True] * (bound + 1)
    out = []
    for p in range(2, bound + 1):
        if sieve[p]:
            out.append(p)
            for m in range(p * p, bound + 1, p):
                sieve[m] = False
    return out


def mw_descriptor(field, n: int, prime_bound: int) -> GroupDescriptor:
    """Structure of the degree-n Milnor-Witt group of the rationals,
    truncated to symbols supported at primes up to the bound."""
    if not isinstance(field, RationalField):
        raise UnsupportedField("descriptors are computed over the rationals")
    if n not in (1, 2):
        raise UnsupportedDegree("descriptors exist in degrees 1 and 2")
    if not isinstance(prime_bound, int) or prime_bound < 3:
        raise BadBound("the prime bound must be an integer >= 3")
    primes = _primes_upto(prime_bound)
    odd_primes = [p for p in primes if p % 2]
    if n == 2:
        free = 1
        cyclic = [p - 1 for p in odd_primes]
        sequence = "natural split exact sequence"
    else:
        free = 1 + len(primes)
        cyclic = [2] * len(odd_primes)
        sequence = "split short exact sequences"
    return GroupDescriptor(
        label=f"K^MW_{n}(Q)",
        free_rank=free,
        cyclic_factors=cyclic,
        provenance=[
            Provenance(
                "mw_descriptor",
                {"field": "Q", "n": n, "bound": prime_bound, "sequence": sequence},
                {"free": free, "cyclic": cyclic},
            )
        ],
        trunc_bound=prime_bound,
    )


def k2_finite_vanishing(q: int) -> bool:
    """Exhaustively confirm that every degree-2 symbol over F_q is
    zero, the computational face of the vanishing of K^MW_2 there."""
    field = finite_field(q)
    zero = mw_zero(field, 2)
    units = list(field.units()) if hasattr(field, "units") else [e for e in field.elements() if e]
    for a in units:
        for b in units:
            if not mw_equal(mw_symbol(field, [a, b]), zero):
                return False
    return True


def k1_finite_order(q: int) -> int:
    """Order of the symbol on a generator of F_q^x in degree 1; equals
    q - 1, matching the cyclic structure of the degree-1 group."""
    field = finite_field(q)
    g = field.generator()
    x = mw_symbol(field, [g])
    acc = x
    order = 1
    zero = mw_zero(field, 1)
    while not mw_equal(acc, zero):
        acc = mw_add(acc, x)
        order += 1
        if order > q:
            raise IntegrityFailure("generator symbol order exceeded the group bound")
    return order


# -- bracket expressions ------------------------------------------------


def _tokenize_brackets(text: str) -> List:
    tokens: List = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*^":
            tokens.append(c)
            i += 1
        elif c == "[":
            j = text.find("]", i + 1)
            if j < 0:
                raise KmwError("unbalanced bracket in element expression")
            tokens.append(("sym", text[i + 1 : j]))
            i = j + 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif text.startswith("eta", i):
            tokens.append("eta")
            i += 3
        else:
            raise KmwError(f"unexpected character {c!r} in element expression")
    return tokens


def parse_mw(field, text: str) -> MWElem:
    """Parse a bracket expression such as ``[2][3]`` or
    ``eta*[-1][2][t]`` into an element over the given field."""
    tokens = _tokenize_brackets(text)
    if not tokens:
        raise KmwError("empty element expression")
    terms: List[Tuple[int, int, Tuple[FieldElem, ...]]] = []
    i = 0
    sign = 1
    coeff: Optional[int] = None
    k = 0
    syms: List[FieldElem] = []
    started = False

    def flush():
        nonlocal coeff, k, syms, started, sign
        if not started:
            raise KmwError("empty term in element expression")
        c = sign * (1 if coeff is None else coeff)
        terms.append((c, k, tuple(syms)))
        coeff, k, syms, started, sign = None, 0, [], False, 1

    while i < len(tokens):
        tok = tokens[i]
        if tok in ("+", "-"):
            if started:
                flush()
                sign = 1 if tok == "+" else -1
            elif not syms and coeff is None and k == 0:
                sign = -sign if tok == "-" else sign
            i += 1
        elif tok == "*":
            i += 1
        elif tok == "eta":
            power = 1
            if i + 2 < len(tokens) and tokens[i + 1] == "^" and isinstance(tokens[i + 2], tuple) and tokens[i + 2][0] == "int":
                power = tokens[i + 2][1]
                i += 2
            k += power
            started = True
            i += 1
        elif isinstance(tok, tuple) and tok[0] == "int":
            coeff = tok[1] if coeff is None else coeff * tok[1]
            started = True
            i += 1
        elif isinstance(tok, tuple) and tok[0] == "sym":
            e = parse_elem(field, tok[1])
            if not e:
                raise ZeroArgument("symbol entries must be nonzero")
            syms.append(e)
            started = True
            i += 1
        else:
            raise KmwError("malformed element expression")
    flush()

    degrees = {len(s) - kk for _, kk, s in terms}
    if len(degrees) > 1:
        raise DegreeOverflow("terms of an element must share one degree")
    degree = degrees.pop()
    if degree not in (0, 1, 2, 3):
        raise DegreeOverflow("degrees are restricted to 0..3")
    monomials: Dict[Monomial, int] = {}
    for c, kk, s in terms:
        mono = (kk, s)
        monomials[mono] = monomials.get(mono, 0) + c
    return _make(field, degree, monomials)


def _format_poly_in_t(p: Poly) -> str:
    if p.is_zero():
        return "0"
    bits = []
    for d in range(p.degree(), -1, -1):
        c = p.coeff(d)
        if not c:
            continue
        cv = c.val
        cs = str(cv)
        if d == 0:
            bits.append(cs)
        elif d == 1:
            bits.append("t" if cs == "1" else f"{cs}*t")
        else:
            bits.append(f"t^{d}" if cs == "1" else f"{cs}*t^{d}")
    return "+".join(bits).replace("+-", "-")


def _format_elem(e: FieldElem) -> str:
    field = e.field
    if isinstance(field, RationalField):
        return str(e.val)
    if isinstance(field, FiniteField):
        if field.degree != 1:
            raise UnsupportedField("no printable form for extension-field entries")
        return str(e.val)
    if isinstance(field, RatFunField):
        num, den = field.num_den(e)
        ns = _format_poly_in_t(num)
        if den == Poly.constant(field.base, 1):
            return ns
        return f"({ns})/({_format_poly_in_t(den)})"
    raise UnsupportedField("no printable form over this field")


def format_mw(x: MWElem) -> str:
    """Render a monomial-backed element as a bracket expression."""
    if x.monomials is None:
        raise UnsupportedField("pair-backed elements have no bracket expression")
    if not x.monomials:
        return "0"
    keys = sorted(
        x.monomials, key=lambda mono: (mono[0], len(mono[1]), [str(s.val) for s in mono[1]])
    )
    parts = []
    for k, syms in keys:
        c = x.monomials[(k, syms)]
        body = []
        if k == 1:
            body.append("eta")
        elif k > 1:
            body.append(f"eta^{k}")
        body.extend(f"[{_format_elem(s)}]" for s in syms)
        if not body:
            term = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = mag + "*".join(body[:1]) + "".join(body[1:])
        if parts:
            parts.append("+" if c > 0 else "-")
        elif c < 0:
            parts.append("-")
        parts.append(term)
    return "".join(parts)
