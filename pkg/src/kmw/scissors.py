"""Scissors-congruence groups of finite fields from finite presentations.

The plain group P(k) has one generator per unit with the normalization
[1] = 0 and one five-term relation per ordered pair x != y of units
distinct from 1.  The refined group RP(k) carries coefficients in the
group ring of the square-class group; it is flattened to an abelian
presentation with two generators per unit (one per square class) and
every relation taken in both translates.

Derived objects are kernels and quotients computed with the integer
linear algebra layer: the Bloch-type kernels B, RB, RP_1, the
comparison kernel of RB -> B, the submodule generated by the
one-dimensional cycles, and the quotient RP-tilde.  The specialization
maps at a degree-one place of k(t) land in pairs of RP-tilde elements.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DegenerateArguments,
    EvenQ,
    IntegrityFailure,
    MixedFields,
    NonUnitArgument,
    TooSmallQ,
    UnsupportedPlace,
    ZeroArgument,
)
from .exact_linear import AbGroupInfo, AbMap, IntMatrix, fp_cokernel, fp_group, fp_kernel, lattice_intersection, odd_part, solve_left
from .fields import (
    FieldElem,
    FiniteField,
    RatFunField,
    _as_place,
    finite_field,
    square_class,
    valuation,
)
from .group_ring import GroupRingElem, gr_class, gr_int, gr_mul, gr_unit, pfister_elem


# -- symmetric squares --------------------------------------------------


class Sym2Elem:
    """Element of the graded symmetric square of the unit group.

    Over a finite field the group is cyclic of even order and the
    symmetric square collapses to one Z/2 coordinate.  Over the
    rationals the basis is -1 followed by the primes; off-diagonal
    coordinates are integers (with a o b = -(b o a)) and diagonal
    coordinates live in Z/2 (since 2(a o a) = 0).
    """

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Sym2Elem is immutable")

    def is_zero(self) -> bool:
        if isinstance(self.field, FiniteField):
            return self.data == 0
        off, diag = self.data
        return not off and not diag

    def __eq__(self, other):
        if not isinstance(other, Sym2Elem):
            return NotImplemented
        return self.field is other.field and self.data == other.data

    def __add__(self, other):
        if not isinstance(other, Sym2Elem):
            return NotImplemented
        if self.field is not other.field:
            raise MixedFields("cannot combine over different fields")
        if isinstance(self.field, FiniteField):
            return Sym2Elem(self.field, (self.data + other.data) % 2)
        off1, diag1 = self.data
        off2, diag2 = other.data
        off = dict(off1)
        for k, v in off2.items():
            off[k] = off.get(k, 0) + v
            if not off[k]:
                del off[k]
        diag = dict(diag1)
        for k, v in diag2.items():
            diag[k] = (diag.get(k, 0) + v) % 2
            if not diag[k]:
                del diag[k]
        return Sym2Elem(self.field, (off, diag))

    def __neg__(self):
        if isinstance(self.field, FiniteField):
            return self
        off, diag = self.data
        return Sym2Elem(self.field, ({k: -v for k, v in off.items()}, dict(diag)))

    def __repr__(self):
        return f"Sym2Elem({self.data!r})"


def _q_basis_vector(x) -> Dict[int, int]:
    """Exponents of a nonzero rational over the basis -1, 2, 3, 5, ...
    keyed by -1 -> key 1, prime p -> key p."""
    from fractions import Fraction

    from .fields import factor_int

    x = Fraction(x)
    if not x:
        raise ZeroArgument("symmetric squares take nonzero arguments")
    out: Dict[int, int] = {}
    if x < 0:
        out[1] = 1
        x = -x
    for p, e in factor_int(x.numerator):
        out[p] = out.get(p, 0) + e
    for p, e in factor_int(x.denominator):
        out[p] = out.get(p, 0) - e
    return {k: v for k, v in out.items() if v}


def sym2(field, a, b) -> Sym2Elem:
    """The product a o b in the graded symmetric square of k^x."""
    if isinstance(field, FiniteField):
        ea = field.elem(a)
        eb = field.elem(b)
        if not ea or not eb:
            raise ZeroArgument("symmetric squares take nonzero arguments")
        return Sym2Elem(field, (field.dlog(ea) * field.dlog(eb)) % 2)
    va = _q_basis_vector(field.elem(a).val)
    vb = _q_basis_vector(field.elem(b).val)
    off: Dict[Tuple[int, int], int] = {}
    diag: Dict[int, int] = {}
    for i, e in va.items():
        for j, f in vb.items():
            if i == j:
                diag[i] = (diag.get(i, 0) + e * f) % 2
            else:
                key, sign = ((i, j), 1) if i < j else ((j, i), -1)
                off[key] = off.get(key, 0) + sign * e * f
    off = {k: v for k, v in off.items() if v}
    diag = {k: v for k, v in diag.items() if v}
    return Sym2Elem(field, (off, diag))


# -- formal refined elements --------------------------------------------


class RPElem:
    """Formal combination of generators [x] with group-ring
    coefficients; arguments are nonzero field elements."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms: Sequence[Tuple[GroupRingElem, FieldElem]]):
        clean: List[Tuple[GroupRingElem, FieldElem]] = []
        for coeff, arg in terms:
            if isinstance(coeff, int):
                coeff = gr_int(field, coeff)
            arg = field.elem(arg)
            if not arg:
                raise ZeroArgument("generator arguments must be nonzero")
            if coeff.field is not field:
                raise MixedFields("coefficient ring does not match the field")
            if coeff.is_zero():
                continue
            clean.append((coeff, arg))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", tuple(clean))

    def __setattr__(self, name, value):
        raise AttributeError("RPElem is immutable")

    def refined(self) -> bool:
        """Whether any coefficient involves a nontrivial square class."""
        return any(
            any(not cls.is_trivial() for cls in coeff.coeffs) for coeff, _ in self.terms
        )

    def __add__(self, other):
        if not isinstance(other, RPElem):
            return NotImplemented
        if self.field is not other.field:
            raise MixedFields("cannot combine over different fields")
        return RPElem(self.field, self.terms + other.terms)

    def __neg__(self):
        return RPElem(self.field, [(-coeff, arg) for coeff, arg in self.terms])

    def __sub__(self, other):
        if not isinstance(other, RPElem):
            return NotImplemented
        return self + (-other)

    def scale(self, coeff: GroupRingElem) -> "RPElem":
        """Left multiplication by a group-ring element."""
        if isinstance(coeff, int):
            coeff = gr_int(self.field, coeff)
        return RPElem(self.field, [(gr_mul(coeff, c), arg) for c, arg in self.terms])

    def __repr__(self):
        if not self.terms:
            return "RPElem(0)"
        bits = [f"({coeff!r})[{arg!r}]" for coeff, arg in self.terms]
        return "RPElem(" + " + ".join(bits) + ")"


def rp_gen(field, a, coeff=1) -> RPElem:
    return RPElem(field, [(coeff if not isinstance(coeff, int) else gr_int(field, coeff), a)])


def refined_five_term(field, x, y) -> RPElem:
    """The five-term relation at (x, y) with its square-class
    coefficients; defined whenever x, y avoid 0 and 1 and differ."""
    x = field.elem(x)
    y = field.elem(y)
    one = field.one
    if not x or not y or x == one or y == one:
        raise DegenerateArguments("five-term arguments must avoid 0 and 1")
    if x == y:
        raise DegenerateArguments("five-term arguments must be distinct")
    inv_x = one / x
    inv_y = one / y
    return RPElem(
        field,
        [
            (gr_int(field, 1), x),
            (gr_int(field, -1), y),
            (gr_unit(field, x), y / x),
            (-gr_unit(field, inv_x - one), (one - inv_x) / (one - inv_y)),
            (gr_unit(field, one - x), (one - x) / (one - y)),
        ],
    )


def plain_five_term(field, x, y) -> RPElem:
    """The same five terms with all coefficients equal to +-1."""
    refined = refined_five_term(field, x, y)
    out = []
    for coeff, arg in refined.terms:
        out.append((gr_int(field, coeff.augmentation()), arg))
    return RPElem(field, out)


def five_term_admissible(field, x, y, place) -> bool:
    """Whether the five-term at (x, y) over k(t) reduces to a genuine
    five-term at the place: x and y are units whose reductions avoid
    0 and 1 and stay distinct."""
    place = _as_place(field, place)
    try:
        vx, rx = valuation(field.elem(x), place)
        vy, ry = valuation(field.elem(y), place)
    except ZeroArgument:
        return False
    if vx or vy:
        return False
    kappa = rx.field
    if rx == kappa.one or ry == kappa.one or rx == ry:
        return False
    return True


# -- presentations ------------------------------------------------------


def _check_q(q: int):
    if q % 2 == 0:
        raise EvenQ("the presentation needs an odd prime power")
    if q < 5:
        raise TooSmallQ("the field must have at least four elements")


class ScissorsContext:
    """All presentation data for one odd prime power, built once."""

    def __init__(self, q: int):
        _check_q(q)
        self.q = q
        self.field = finite_field(q)
        self.units = [e for e in self.field.elements() if e]
        self.unit_index = {e.val: i for i, e in enumerate(self.units)}
        self.n_units = len(self.units)
        self._p_group: Optional[AbGroupInfo] = None
        self._rp_group: Optional[AbGroupInfo] = None
        self._rp_rows: Optional[List[List[int]]] = None
        self._maps = None
        self._derived = None
        self._k1_rows: Optional[List[List[int]]] = None
        self._rp_tilde: Optional[AbGroupInfo] = None

    # -- plain presentation --------------------------------------------

    def _pairs(self):
        one = self.field.one
        pool = [e for e in self.units if e != one]
        for x in pool:
            for y in pool:
                if x != y:
                    yield x, y

    def p_vector(self, elem: RPElem) -> List[int]:
        """Coordinates of a plain (augmentation-coefficient) element."""
        vec = [0] * self.n_units
        for coeff, arg in elem.terms:
            vec[self.unit_index[arg.val]] += coeff.augmentation()
        return vec

    def p_group(self) -> AbGroupInfo:
        if self._p_group is None:
            labels = [f"[{e!r}]" for e in self.units]
            rows = []
            one_row = [0] * self.n_units
            one_row[self.unit_index[self.field.one.val]] = 1
            rows.append(one_row)
            for x, y in self._pairs():
                rows.append(self.p_vector(plain_five_term(self.field, x, y)))
            self._p_group = fp_group(labels, rows)
        return self._p_group

    # -- refined flat presentation -------------------------------------

    def flat_index(self, g: int, arg: FieldElem) -> int:
        return g * self.n_units + self.unit_index[arg.val]

    def rp_vector(self, elem: RPElem, twist: int = 0) -> List[int]:
        """Flat coordinates of a refined element, optionally multiplied
        through by the nontrivial square class."""
        vec = [0] * (2 * self.n_units)
        for coeff, arg in elem.terms:
            for cls, n in coeff.coeffs.items():
                g = (cls.key + twist) % 2
                vec[self.flat_index(g, arg)] += n
        return vec

    def rp_rows(self) -> List[List[int]]:
        if self._rp_rows is None:
            rows: List[List[int]] = []
            one = self.field.one
            for twist in (0, 1):
                row = [0] * (2 * self.n_units)
                row[self.flat_index(twist, one)] = 1
                rows.append(row)
            for x, y in self._pairs():
                rel = refined_five_term(self.field, x, y)
                rows.append(self.rp_vector(rel, 0))
                rows.append(self.rp_vector(rel, 1))
            self._rp_rows = rows
        return self._rp_rows

    def rp_labels(self) -> List[str]:
        return [f"[{e!r}]" for e in self.units] + [f"s[{e!r}]" for e in self.units]

    def rp_group(self) -> AbGroupInfo:
        if self._rp_group is None:
            self._rp_group = fp_group(self.rp_labels(), self.rp_rows())
        return self._rp_group

    # -- lambda maps ----------------------------------------------------

    def _lambda1_image(self, g: int, arg: FieldElem) -> Tuple[int, int]:
        one = self.field.one
        if arg == one:
            return (0, 0)
        w = pfister_elem(self.field, [arg, one - arg])
        if g:
            w = w * gr_class(square_class(self.field.nonsquare()))
        return w.to_pair()

    def _lambda2_bit(self, arg: FieldElem) -> int:
        one = self.field.one
        if arg == one:
            return 0
        return (self.field.dlog(arg) * self.field.dlog(one - arg)) % 2

    def maps(self):
        """(lambda_1, lambda_2, Lambda, lambda on P, projection RP->P)."""
        if self._maps is None:
            z2 = fp_group(["w"], [[2]])
            zz = fp_group(["c1", "cs"], [])
            mixed = fp_group(["c1", "cs", "w"], [[0, 0, 2]])
            rp = self.rp_group()
            p = self.p_group()
            im1: List[List[int]] = []
            im2: List[List[int]] = []
            im_mixed: List[List[int]] = []
            im_proj: List[List[int]] = []
            for g in (0, 1):
                for arg in self.units:
                    pair = self._lambda1_image(g, arg)
                    bit = self._lambda2_bit(arg)
                    im1.append(list(pair))
                    im2.append([bit])
                    im_mixed.append([pair[0], pair[1], bit])
                    proj_row = [0] * self.n_units
                    proj_row[self.unit_index[arg.val]] = 1
                    im_proj.append(proj_row)
            lambda1 = AbMap(rp, zz, im1)
            lambda2 = AbMap(rp, z2, im2)
            lam_mixed = AbMap(rp, mixed, im_mixed)
            im_p = []
            for arg in self.units:
                im_p.append([self._lambda2_bit(arg)])
            lambda_p = AbMap(p, z2, im_p)
            proj = AbMap(rp, p, im_proj)
            self._maps = (lambda1, lambda2, lam_mixed, lambda_p, proj)
        return self._maps

    # -- K1 submodule ---------------------------------------------------

    def psi1_vector(self, x: FieldElem, twist: int = 0) -> List[int]:
        """[x] + <-1>[1/x], flattened, optionally s-translated."""
        elem = RPElem(
            self.field,
            [
                (gr_int(self.field, 1), x),
                (gr_unit(self.field, self.field.elem(-1)), self.field.one / x),
            ],
        )
        return self.rp_vector(elem, twist)

    def k1_rows(self) -> List[List[int]]:
        if self._k1_rows is None:
            rows = []
            for x in self.units:
                rows.append(self.psi1_vector(x, 0))
                rows.append(self.psi1_vector(x, 1))
            self._k1_rows = rows
        return self._k1_rows

    def rp_tilde(self) -> AbGroupInfo:
        if self._rp_tilde is None:
            self._rp_tilde = fp_group(self.rp_labels(), self.rp_rows() + self.k1_rows())
        return self._rp_tilde

    # -- derived groups -------------------------------------------------

    def derived(self, strict: bool = True):
        if self._derived is None:
            lambda1, lambda2, lam_mixed, lambda_p, proj = self.maps()
            p = self.p_group()
            rp = self.rp_group()
            b_grp, b_incl = fp_kernel(lambda_p)
            rb_grp, rb_incl = fp_kernel(lam_mixed)
            rp1_grp, rp1_incl = fp_kernel(lambda1)

            # express the image of each RB generator in B coordinates
            b_gens = [list(b_incl.images.row(i)) for i in range(b_grp.ngens)]
            p_rel = p.relation_matrix
            stack_rows = b_gens + [list(p_rel.row(i)) for i in range(p_rel.rows)]
            stacked = IntMatrix.from_rows(stack_rows, cols=self.n_units)
            rb_to_b_images = []
            for i in range(rb_grp.ngens):
                vec = proj.apply(rb_incl.images.row(i))
                sol = solve_left(stacked, vec)
                if sol is None:
                    raise IntegrityFailure("image of RB escapes the Bloch kernel")
                rb_to_b_images.append(list(sol[: b_grp.ngens]))
            rb_to_b = AbMap(rb_grp, b_grp, rb_to_b_images)
            rblker_grp, _ = fp_kernel(rb_to_b)
            coker = fp_cokernel(rb_to_b)
            if strict:
                if rblker_grp.order() != 1:
                    raise IntegrityFailure("comparison kernel RB -> B is not trivial")
                if coker.order() != 1:
                    raise IntegrityFailure("RB -> B fails to be onto")

            # intersection of RP1 with the K1 submodule inside RP
            rp_rel = rp.relation_matrix
            rel_rows = [list(rp_rel.row(i)) for i in range(rp_rel.rows)]
            rp1_rows = [list(rp1_incl.images.row(i)) for i in range(rp1_grp.ngens)]
            cols = 2 * self.n_units
            lat1 = IntMatrix.from_rows(rp1_rows + rel_rows, cols=cols)
            lat2 = IntMatrix.from_rows(self.k1_rows() + rel_rows, cols=cols)
            inter = lattice_intersection(lat1, lat2)
            exponent = 1
            for i in range(inter.rows):
                order = rp.element_order(inter.row(i))
                if order is None:
                    raise IntegrityFailure("intersection with K1 has an infinite cycle")
                exponent = exponent * order // gcd(exponent, order)

            self._derived = {
                "P": p,
                "half_P": odd_part(p),
                "RP": rp,
                "B": b_grp,
                "RB": rb_grp,
                "RP1": rp1_grp,
                "half_RP1": odd_part(rp1_grp),
                "rblker": rblker_grp,
                "cokernel_RB_to_B": coker,
                "RP_tilde": self.rp_tilde(),
                "k1_intersection_exponent": exponent,
            }
        return self._derived


@lru_cache(maxsize=None)
def scissors_context(q: int) -> ScissorsContext:
    return ScissorsContext(q)


# -- public presentation operations ------------------------------------


def pb_group(q: int) -> AbGroupInfo:
    """P(F_q) from its finite presentation."""
    return scissors_context(q).p_group()


def pb_half(q: int) -> AbGroupInfo:
    """Odd part of P(F_q); the expected value is Z/(q+1)' where the
    prime denotes the odd part."""
    return odd_part(pb_group(q))


def odd_part_int(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def rp_presentation(q: int):
    """(flat generator labels, relation rows, flattened group)."""
    ctx = scissors_context(q)
    return ctx.rp_labels(), ctx.rp_rows(), ctx.rp_group()


def lambda_maps(q: int):
    """(lambda_1, lambda_2, lambda on P) as validated maps."""
    ctx = scissors_context(q)
    lambda1, lambda2, _, lambda_p, _ = ctx.maps()
    return lambda1, lambda2, lambda_p


def derived_groups(q: int, strict: bool = True):
    return scissors_context(q).derived(strict=strict)


def r_element(field, x) -> RPElem:
    """(<-1> + 1)[x] + <<1-x>> psi_1(x): a kernel element of lambda_1."""
    one = field.one
    x = field.elem(x)
    if not x or x == one:
        raise DegenerateArguments("the construction needs x outside {0, 1}")
    head = RPElem(
        field,
        [
            (gr_int(field, 1) + gr_unit(field, field.elem(-1)), x),
        ],
    )
    psi = RPElem(
        field,
        [
            (gr_int(field, 1), x),
            (gr_unit(field, field.elem(-1)), one / x),
        ],
    )
    return head + psi.scale(pfister_elem(field, [one - x]))


# -- specialization at a degree-one place ------------------------------


class RPTildeElem:
    """Element of RP-tilde(F_q) given by flat coordinates."""

    __slots__ = ("q", "vector")

    def __init__(self, q: int, vector: Sequence[int]):
        ctx = scissors_context(q)
        if len(vector) != 2 * ctx.n_units:
            raise ValueError("coordinate length mismatch")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "vector", tuple(int(v) for v in vector))

    def __setattr__(self, name, value):
        raise AttributeError("RPTildeElem is immutable")

    def is_zero(self) -> bool:
        return scissors_context(self.q).rp_tilde().is_zero(list(self.vector))

    def __eq__(self, other):
        if not isinstance(other, RPTildeElem):
            return NotImplemented
        if self.q != other.q:
            return False
        diff = [a - b for a, b in zip(self.vector, other.vector)]
        return scissors_context(self.q).rp_tilde().is_zero(diff)

    def __add__(self, other):
        if not isinstance(other, RPTildeElem) or self.q != other.q:
            return NotImplemented
        return RPTildeElem(self.q, [a + b for a, b in zip(self.vector, other.vector)])

    def __neg__(self):
        return RPTildeElem(self.q, [-a for a in self.vector])

    def __sub__(self, other):
        if not isinstance(other, RPTildeElem) or self.q != other.q:
            return NotImplemented
        return self + (-other)

    def twist(self) -> "RPTildeElem":
        """Action of the nontrivial square class: swap the translates."""
        n = len(self.vector) // 2
        return RPTildeElem(self.q, list(self.vector[n:]) + list(self.vector[:n]))

    def __repr__(self):
        return f"RPTildeElem(q={self.q}, vector={self.vector})"


def rp_tilde_gen(q: int, a, twist: int = 0) -> RPTildeElem:
    ctx = scissors_context(q)
    arg = ctx.field.elem(a)
    if not arg:
        raise ZeroArgument("generator arguments must be nonzero")
    vec = [0] * (2 * ctx.n_units)
    vec[ctx.flat_index(twist % 2, arg)] = 1
    return RPTildeElem(q, vec)


def rp_tilde_zero(q: int) -> RPTildeElem:
    ctx = scissors_context(q)
    return RPTildeElem(q, [0] * (2 * ctx.n_units))


def _place_for_sv(field, place):
    place = _as_place(field, place)
    if place.kind != "poly" or place.data.degree() != 1:
        raise UnsupportedPlace("specialization needs a degree-one finite place")
    return place


def sv_apply(xi: RPElem, place) -> Tuple[RPTildeElem, RPTildeElem]:
    """Specialize a unit-argument combination over k(t) at a
    degree-one place, splitting by the t-parity of the coefficients."""
    field = xi.field
    if not isinstance(field, RatFunField) or not isinstance(field.base, FiniteField):
        raise UnsupportedPlace("specialization is defined over F_q(t)")
    place = _place_for_sv(field, place)
    q = field.base.order
    ctx = scissors_context(q)
    comps = [
        [0] * (2 * ctx.n_units),
        [0] * (2 * ctx.n_units),
    ]
    for coeff, arg in xi.terms:
        v, red = valuation(arg, place)
        if v != 0:
            raise NonUnitArgument("every generator argument must be a unit at the place")
        for cls, n in coeff.coeffs.items():
            w, unit_res = valuation(cls.rep(), place)
            g = square_class(unit_res).key
            comps[w % 2][ctx.flat_index(g, red)] += n
    return RPTildeElem(q, comps[0]), RPTildeElem(q, comps[1])


def delta_t_rp(xi: RPElem, place) -> RPTildeElem:
    """Second component of the specialization: the residue landing in
    RP-tilde of the residue field."""
    return sv_apply(xi, place)[1]
