"""Field towers, polynomial factorization, square classes, places, and
the symbol calculus, checked against brute-force oracles where one
exists (squares mod p for Legendre, congruence solvability for the
2-adic Hilbert symbol, the product formula globally)."""

import random
from fractions import Fraction

import pytest

import kmw.fields as fl
from kmw.errors import (
    EvenPrimeForLegendre,
    InfinitePlace,
    MixedFields,
    NonIrreducibleModulus,
    ZeroArgument,
    ZeroInversion,
)


class TestFiniteFields:
    def test_prime_field_axioms_exhaustive(self):
        F7 = fl.finite_field(7)
        els = list(F7.elements())
        assert len(els) == 7
        for a in els:
            for b in els:
                assert (a + b) - b == a
                assert a * b == b * a
                if b:
                    assert (a * b) / b == a
        assert F7.elem(3) * F7.elem(5) == F7.one

    def test_extension_moduli_are_canonical(self):
        assert fl.finite_field(9).modulus.coeffs == (1, 0, 1)  # x^2 + 1
        assert fl.finite_field(25).modulus.coeffs == (2, 0, 1)  # x^2 + 2
        assert fl.finite_field(49).modulus.coeffs == (1, 0, 1)  # x^2 + 1
        assert fl.finite_field(27).modulus.coeffs == (1, 2, 0, 1)  # x^3 + 2x + 1

    def test_extension_arithmetic(self):
        F9 = fl.finite_field(9)
        x = F9.elem((0, 1))
        assert x * x == F9.elem(-1)  # modulus x^2 + 1
        els = list(F9.elements())
        assert len(els) == 9
        assert len(set(e.val for e in els)) == 9
        # multiplicative group has order 8
        for e in els:
            if e:
                assert e**8 == F9.one

    def test_tower_field(self):
        F9 = fl.finite_field(9)
        # x^2 - (generator) is irreducible over F_9 iff generator is a nonsquare
        ns = F9.nonsquare()
        mod = fl.Poly.from_elems(F9, [-ns, 0, 1])
        F81 = fl.extension_field(F9, mod)
        assert F81.order == 81
        y = F81.elem((F9.zero.val, F9.one.val))
        assert y * y == F81.elem(ns)

    def test_generator_and_dlog(self):
        for q in (5, 7, 9, 27):
            F = fl.finite_field(q)
            g = F.generator()
            seen = set()
            acc = F.one
            for _ in range(q - 1):
                seen.add(acc.val)
                acc = acc * g
            assert len(seen) == q - 1
            for k in (0, 1, 2, q - 2):
                assert F.dlog(g**k) == k % (q - 1)

    def test_square_counts(self):
        for q in (5, 7, 9, 25):
            F = fl.finite_field(q)
            squares = {(e * e).val for e in F.units()}
            assert len(squares) == (q - 1) // 2
            for e in F.units():
                assert fl.is_square(e) == (e.val in squares)
            assert not fl.is_square(F.nonsquare())

    def test_errors(self):
        F5 = fl.finite_field(5)
        with pytest.raises(ZeroInversion):
            F5.zero.inv()
        with pytest.raises(ZeroArgument):
            fl.square_class(F5.zero)
        F3 = fl.finite_field(3)
        with pytest.raises(NonIrreducibleModulus):
            fl.extension_field(F3, fl.polynomial(F3, [2, 0, 1]))  # t^2+2 = (t-1)(t+1)
        with pytest.raises(ValueError):
            fl.finite_field(8)
        with pytest.raises(ValueError):
            fl.finite_field(12)
        with pytest.raises(MixedFields):
            F5.elem(1) + fl.finite_field(7).elem(1)

    def test_field_make(self):
        assert fl.field_make("F49").order == 49
        assert fl.field_make("Q") is fl.rationals()
        ft = fl.field_make("F7t")
        assert isinstance(ft, fl.RatFunField) and ft.base.order == 7
        assert isinstance(fl.field_make("Qt").base, fl.RationalField)
        with pytest.raises(ValueError):
            fl.field_make("F10")


class TestPolynomials:
    def test_divmod_property(self):
        rng = random.Random(2)
        F7 = fl.finite_field(7)
        for _ in range(60):
            a = fl.polynomial(F7, [rng.randrange(7) for _ in range(rng.randint(1, 7))])
            b = fl.polynomial(F7, [rng.randrange(7) for _ in range(rng.randint(1, 5))])
            if b.is_zero():
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero() or r.degree() < b.degree()

    def test_gcd(self):
        F5 = fl.finite_field(5)
        t = fl.Poly.x(F5)
        f = (t + 1) * (t + 2) * (t + 2)
        g = (t + 2) * (t + 3)
        d = f.gcd(g)
        assert d == t + 2

    def test_irreducibility(self):
        F3 = fl.finite_field(3)
        assert fl.poly_is_irreducible(fl.polynomial(F3, [1, 0, 1]))  # t^2+1
        assert not fl.poly_is_irreducible(fl.polynomial(F3, [2, 0, 1]))  # t^2+2
        F5 = fl.finite_field(5)
        # counts: number of monic irreducible quadratics over F_q is q(q-1)/2
        count = 0
        for a in range(5):
            for b in range(5):
                if fl.poly_is_irreducible(fl.polynomial(F5, [b, a, 1])):
                    count += 1
        assert count == 10

    def test_squarefree_decomposition(self):
        F5 = fl.finite_field(5)
        t = fl.Poly.x(F5)
        f = (t + 1) ** 2 * (t + 2) * (t**2 + 2)
        parts = fl.squarefree_decomposition(f)
        rebuilt = fl.Poly.constant(F5, 1)
        for g, m in parts:
            for _ in range(m):
                rebuilt = rebuilt * g
        assert rebuilt == f.monic()
        # p-th powers are handled
        f = (t + 1) ** 5
        parts = fl.squarefree_decomposition(f)
        assert parts == [(t + 1, 5)]

    def test_factor_poly(self):
        F5 = fl.finite_field(5)
        t = fl.Poly.x(F5)
        f = t**2 - 1
        facs = fl.factor_poly(f)
        assert facs == [(t + 1, 1), (t + 4, 1)]
        # deterministic across calls
        assert fl.factor_poly(f) == facs

    def test_factor_poly_random_reconstruction(self):
        rng = random.Random(9)
        for q in (5, 9):
            F = fl.finite_field(q)
            els = list(F.elements())
            for _ in range(25):
                deg = rng.randint(1, 6)
                coeffs = [rng.choice(els) for _ in range(deg)] + [F.one]
                f = fl.Poly.from_elems(F, coeffs)
                facs = fl.factor_poly(f)
                rebuilt = fl.Poly.constant(F, 1)
                total = 0
                for g, m in facs:
                    assert g.is_monic()
                    assert fl.poly_is_irreducible(g)
                    total += m * g.degree()
                    for _ in range(m):
                        rebuilt = rebuilt * g
                assert total == f.degree()
                assert rebuilt == f.monic()

    def test_factor_zero_raises(self):
        F5 = fl.finite_field(5)
        with pytest.raises(fl.ZeroPolynomial if hasattr(fl, "ZeroPolynomial") else Exception):
            fl.factor_poly(fl.Poly(F5, []))


class TestRatFun:
    def test_arithmetic_and_parse(self):
        F5t = fl.function_field(fl.finite_field(5))
        f = F5t.parse("(t+2)/t")
        g = F5t.parse("t") * f
        assert g == F5t.parse("t+2")
        assert F5t.parse("1/t") * F5t.t == F5t.from_base(1)
        assert F5t.parse("(t^2+1)/(t+3)") == F5t.parse("t^2+1") / F5t.parse("t+3")

    def test_normalization(self):
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        # 2t/2 reduces with monic denominator
        e = F5t.elem((fl.polynomial(F5, [0, 2]), fl.polynomial(F5, [2])))
        num, den = e.val
        assert den.degree() == 0 and den.is_monic()
        assert e == F5t.t

    def test_valuation_examples(self):
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        f = F5t.parse("(t+2)/t")
        at = lambda p: fl.function_place(F5t, p)
        v, r = fl.valuation(f, fl.polynomial(F5, [-1, 1]))  # t - 1
        assert v == 0 and r == F5.elem(3)
        v, r = fl.valuation(f, fl.polynomial(F5, [0, 1]))  # t
        assert v == -1 and r == F5.elem(2)
        v, r = fl.valuation(f, "inf")
        assert v == 0 and r == F5.one
        v, r = fl.valuation(F5t.parse("t^3+t"), "inf")
        assert v == -3 and r == F5.one
        with pytest.raises(ZeroArgument):
            fl.valuation(F5t.elem(0), "inf")

    def test_residue_in_extension_field(self):
        F3 = fl.finite_field(3)
        F3t = fl.function_field(F3)
        pi = fl.polynomial(F3, [1, 0, 1])  # t^2 + 1, irreducible
        v, r = fl.valuation(F3t.t, pi)
        assert v == 0
        kappa = r.field
        assert kappa.order == 9
        # the residue of t is the generator image x, whose square is -1
        assert r * r == kappa.elem(-1)

    def test_qt_restricted(self):
        Qt = fl.function_field(fl.rationals())
        f = Qt.parse("(t+2)/t")
        v, r = fl.valuation(f, fl.polynomial(fl.rationals(), [0, 1]))
        assert v == -1 and r == fl.rationals().elem(2)
        from kmw.errors import UnsupportedPlace

        with pytest.raises(UnsupportedPlace):
            fl.function_place(Qt, fl.polynomial(fl.rationals(), [1, 0, 1]))


class TestSquareClasses:
    def test_rational_examples(self):
        Q = fl.rationals()
        c = fl.square_class(Q.elem(-18))
        assert c.key == (1, 2)
        assert c.rep() == Q.elem(-2)
        assert fl.square_class(Q.elem(Fraction(4, 9))).is_trivial()
        assert fl.square_class(Q.elem(Fraction(-3, 4))).key == (1, 3)

    def test_multiplicative_sampled(self):
        rng = random.Random(33)
        Q = fl.rationals()
        for _ in range(50):
            a = Fraction(rng.randint(-50, 50) or 1, rng.randint(1, 30))
            b = Fraction(rng.randint(-50, 50) or 1, rng.randint(1, 30))
            ca, cb = fl.square_class(Q.elem(a)), fl.square_class(Q.elem(b))
            assert fl.square_class(Q.elem(a * b)) == ca * cb

    def test_multiplicative_exhaustive_finite(self):
        for q in (5, 7, 9, 27):
            F = fl.finite_field(q)
            for a in F.units():
                for b in F.units():
                    assert fl.square_class(a * b) == fl.square_class(a) * fl.square_class(b)

    def test_ratfun_classes(self):
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        t = F5t.t
        assert fl.square_class(t * t).is_trivial()
        c = fl.square_class(t**3)
        bit, poly = c.key
        assert bit == 0 and poly == (0, 1)  # class of t
        c2 = fl.square_class(F5t.from_base(2) * t)
        assert c2.key[0] == 1  # 2 is a nonsquare mod 5
        assert (c * c).is_trivial()
        # the class sees through squares in numerator and denominator
        assert fl.square_class(F5t.parse("t^3/(t+1)^2")) == c

    def test_ratfun_class_multiplicative_sampled(self):
        rng = random.Random(71)
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        els = []
        while len(els) < 12:
            num = fl.polynomial(F5, [rng.randrange(5) for _ in range(rng.randint(1, 4))])
            den = fl.polynomial(F5, [rng.randrange(5) for _ in range(rng.randint(1, 3))])
            if num.is_zero() or den.is_zero():
                continue
            els.append(F5t.elem((num, den)))
        for a in els:
            for b in els:
                assert fl.square_class(a * b) == fl.square_class(a) * fl.square_class(b)

    def test_qt_classes(self):
        Qt = fl.function_field(fl.rationals())
        c = fl.square_class(Qt.parse("(t^2+1)*4/9"))
        base_key, poly = c.key
        assert base_key == (0, 1)
        assert fl.Poly(fl.rationals(), poly).degree() == 2
        assert fl.square_class(Qt.parse("t^2")).is_trivial()
        d = fl.square_class(Qt.parse("0-2*t"))
        assert d.key[0] == (1, 2)

    def test_place_parity(self):
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        t_place = fl.function_place(F5t, fl.Poly.x(F5))
        inf = fl.function_place(F5t, "inf")
        c = fl.square_class(F5t.parse("2*t"))
        assert fl.class_place_parity(c, t_place) == 1
        assert fl.class_place_parity(c, inf) == 1
        assert fl.class_place_parity(fl.square_class(F5t.parse("t^2")), t_place) == 0


class TestLegendreHilbert:
    def test_legendre_matches_square_table(self):
        for p in (3, 5, 7, 11, 13):
            squares = {(x * x) % p for x in range(1, p)}
            for a in range(1, p):
                assert fl.legendre(a, p) == (1 if a in squares else -1)
            assert fl.legendre(p, p) == 0
            assert fl.legendre(a + p, p) == fl.legendre(a, p)

    def test_legendre_errors(self):
        with pytest.raises(EvenPrimeForLegendre):
            fl.legendre(3, 2)
        with pytest.raises(ZeroArgument):
            fl.legendre(0, 5)
        with pytest.raises(ValueError):
            fl.legendre(1, 9)

    def test_hilbert_real(self):
        assert fl.hilbert(-1, -1, "real") == -1
        assert fl.hilbert(-1, 2, "real") == 1
        assert fl.hilbert(3, 5, "real") == 1

    def test_hilbert_two_adic_against_solvability(self):
        # (a,b)_2 = 1 iff z^2 = a x^2 + b y^2 has a primitive 2-adic
        # solution; for squarefree a, b solvability mod 2^8 decides it
        def oracle(a, b):
            M = 256
            sq = {}
            for z in range(M):
                sq.setdefault(z * z % M, []).append(z)
            for x in range(M):
                for y in range(M):
                    t = (a * x * x + b * y * y) % M
                    if t not in sq:
                        continue
                    if x % 2 or y % 2:
                        return 1
                    if any(z % 2 for z in sq[t]):
                        return 1
            return -1

        vals = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, 15, -30]
        for a in vals:
            for b in vals:
                assert fl.hilbert(a, b, 2) == oracle(a, b), (a, b)

    def test_hilbert_known_values(self):
        assert fl.hilbert(-1, -1, 2) == -1
        assert fl.hilbert(2, 3, 3) == -1
        assert fl.hilbert(5, 7, 5) == fl.legendre(7, 5)
        assert fl.hilbert(Fraction(1, 2), 3, 2) == fl.hilbert(2, 3, 2)

    def test_hilbert_bimultiplicative(self):
        rng = random.Random(13)
        places = ["real", 2, 3, 5, 7]
        for _ in range(40):
            a = Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 20))
            a2 = Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 20))
            b = Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 20))
            v = rng.choice(places)
            assert fl.hilbert(a * a2, b, v) == fl.hilbert(a, b, v) * fl.hilbert(a2, b, v)

    def test_product_formula_rationals(self):
        rng = random.Random(77)
        Q = fl.rationals()
        for _ in range(100):
            a = Fraction(rng.randint(-1000, 1000) or 1, rng.randint(1, 1000))
            b = Fraction(rng.randint(-1000, 1000) or 1, rng.randint(1, 1000))
            prod = 1
            for v in fl.support_places(Q, [Q.elem(a), Q.elem(b)]):
                prod *= fl.hilbert(a, b, v)
            assert prod == 1

    def test_product_formula_function_field(self):
        rng = random.Random(123)
        F5 = fl.finite_field(5)
        F5t = fl.function_field(F5)
        for _ in range(25):
            def rand_elem():
                while True:
                    num = fl.polynomial(F5, [rng.randrange(5) for _ in range(rng.randint(1, 4))])
                    den = fl.polynomial(F5, [rng.randrange(5) for _ in range(rng.randint(1, 3))])
                    if not num.is_zero() and not den.is_zero():
                        return F5t.elem((num, den))

            a, b = rand_elem(), rand_elem()
            prod = 1
            for v in fl.support_places(F5t, [a, b]):
                prod *= fl.hilbert(a, b, v)
            assert prod == 1


class TestTameSymbol:
    def test_pinned_values(self):
        # v(5)=1, v(7)=0 at p=5: the symbol is 7^{-1} = 3; swapping the
        # arguments gives 7 mod 5 = 2
        assert fl.tame_symbol(5, 7, 5) == fl.finite_field(5).elem(3)
        assert fl.tame_symbol(7, 5, 5) == fl.finite_field(5).elem(2)
        F5t = fl.function_field(fl.finite_field(5))
        t = F5t.t
        got = fl.tame_symbol(t, F5t.from_base(3), fl.function_place(F5t, fl.Poly.x(F5t.base)))
        assert got == fl.finite_field(5).elem(2)  # 3^{-1} = 2

    def test_units_give_one(self):
        assert fl.tame_symbol(3, 7, 5) == fl.finite_field(5).one
        F5t = fl.function_field(fl.finite_field(5))
        got = fl.tame_symbol(
            F5t.parse("t+1"), F5t.parse("t+2"), fl.function_place(F5t, fl.Poly.x(F5t.base))
        )
        assert got == fl.finite_field(5).one

    def test_bimultiplicative(self):
        rng = random.Random(5)
        for _ in range(30):
            p = rng.choice([3, 5, 7])
            a = Fraction(rng.randint(1, 60), rng.randint(1, 60))
            a2 = Fraction(rng.randint(1, 60), rng.randint(1, 60))
            b = Fraction(rng.randint(1, 60), rng.randint(1, 60))
            lhs = fl.tame_symbol(a * a2, b, p)
            rhs = fl.tame_symbol(a, b, p) * fl.tame_symbol(a2, b, p)
            assert lhs == rhs

    def test_steinberg(self):
        # {a, 1-a} is a symbol relation: its Hilbert symbol is trivial at
        # every place
        rng = random.Random(55)
        count = 0
        while count < 30:
            a = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
            if a in (0, 1):
                continue
            count += 1
            Q = fl.rationals()
            for v in fl.support_places(Q, [Q.elem(a), Q.elem(1 - a)]):
                assert fl.hilbert(a, 1 - a, v) == 1

    def test_errors(self):
        with pytest.raises(InfinitePlace):
            fl.tame_symbol(2, 3, "real")
        with pytest.raises(ZeroArgument):
            fl.tame_symbol(0, 3, 5)

    def test_tame_at_two(self):
        # the residue field at 2 is trivial on squares of units; the
        # symbol still exists and lands in F_2
        got = fl.tame_symbol(2, 3, 2)
        assert got.field.order == 2
        assert got == got.field.one
