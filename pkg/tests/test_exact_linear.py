"""Normal forms and presented abelian groups, checked against
independent oracles: determinantal divisors for invariant factors and
cofactor expansion for determinants."""

import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmw.errors import RelationNotKilled
from kmw.exact_linear import (
    AbMap,
    IntMatrix,
    det,
    fp_cokernel,
    fp_group,
    fp_image,
    fp_kernel,
    hnf,
    lattice_intersection,
    left_kernel,
    odd_part,
    snf,
    solve_left,
)


def laplace_det(rows):
    """Cofactor-expansion determinant (oracle; exponential, tiny inputs)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            sign = -1 if j % 2 else 1
            total += sign * rows[0][j] * laplace_det(minor)
    return total


def invariant_factors_oracle(rows, ncols):
    """Invariant factors via gcds of k x k minors (determinantal
    divisors): d_1 ... d_k = gcd of all k x k minors."""
    nrows = len(rows)
    divisors = [1]
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for ri in combinations(range(nrows), k):
            for ci in combinations(range(ncols), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = gcd(g, laplace_det(sub))
        if g == 0:
            break
        divisors.append(g)
    facs = []
    for i in range(1, len(divisors)):
        facs.append(divisors[i] // divisors[i - 1])
    return facs  # includes leading 1s


small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


class TestSNF:
    def test_frozen_examples(self):
        d, _, _ = snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
        assert d.diagonal() == (1, 6)
        d, _, _ = snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
        assert d.diagonal() == (2, 4)
        d, _, _ = snf(IntMatrix.from_rows([[0, 0], [0, 0]]))
        assert d.diagonal() == (0, 0)

    @settings(max_examples=120, deadline=None)
    @given(small_matrix)
    def test_decomposition_properties(self, rows):
        m = IntMatrix.from_rows(rows)
        d, u, v = snf(m)
        assert u.mul(m).mul(v) == d
        assert abs(laplace_det(u.row_list())) == 1
        assert abs(laplace_det(v.row_list())) == 1
        assert d.is_diagonal()
        diag = d.diagonal()
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            if b:
                assert a != 0 and b % a == 0
            # zeros only at the end
            if a == 0:
                assert b == 0

    @settings(max_examples=80, deadline=None)
    @given(small_matrix)
    def test_matches_determinantal_divisors(self, rows):
        m = IntMatrix.from_rows(rows)
        d, _, _ = snf(m)
        got = [x for x in d.diagonal() if x]
        assert got == invariant_factors_oracle(rows, m.cols)

    def test_degenerate_shapes(self):
        for r, c in [(0, 0), (0, 3), (3, 0)]:
            m = IntMatrix.zeros(r, c)
            d, u, v = snf(m)
            assert (d.rows, d.cols) == (r, c)
            assert u.mul(m).mul(v) == d

    def test_big_entries(self):
        # forces the arbitrary-precision path regardless of backend
        x = 10**25
        m = IntMatrix.from_rows([[x, x + 2], [3, 7]])
        d, u, v = snf(m)
        assert u.mul(m).mul(v) == d
        got = [y for y in d.diagonal() if y]
        assert got == invariant_factors_oracle(m.row_list(), 2)


class TestHNF:
    @settings(max_examples=100, deadline=None)
    @given(small_matrix)
    def test_row_lattice_preserved(self, rows):
        m = IntMatrix.from_rows(rows)
        h, u, rank = hnf(m)
        assert u.mul(m) == h
        assert abs(laplace_det(u.row_list())) == 1
        # unimodular u means the row lattices coincide exactly

    @settings(max_examples=100, deadline=None)
    @given(small_matrix)
    def test_shape(self, rows):
        m = IntMatrix.from_rows(rows)
        h, _, rank = hnf(m)
        hr = h.row_list()
        pivots = []
        for i in range(rank):
            nz = [j for j, x in enumerate(hr[i]) if x]
            assert nz, "zero row counted in rank"
            c = nz[0]
            p = hr[i][c]
            assert p > 0
            pivots.append(c)
            for i2 in range(i):
                assert 0 <= hr[i2][c] < p
        assert pivots == sorted(pivots)
        assert len(set(pivots)) == len(pivots)
        for i in range(rank, m.rows):
            assert not any(hr[i])

    def test_rank_matches_rational_rank(self):
        rng = random.Random(7)
        from fractions import Fraction

        def frac_rank(rows):
            a = [[Fraction(x) for x in r] for r in rows]
            rank = 0
            for col in range(len(a[0]) if a else 0):
                piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
                if piv is None:
                    continue
                a[rank], a[piv] = a[piv], a[rank]
                for i in range(len(a)):
                    if i != rank and a[i][col]:
                        f = a[i][col] / a[rank][col]
                        a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
                rank += 1
            return rank

        for _ in range(40):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
            _, _, rank = hnf(IntMatrix.from_rows(rows))
            assert rank == frac_rank(rows)


class TestSolveAndKernels:
    def test_solve_left_roundtrip(self):
        rng = random.Random(11)
        for _ in range(60):
            r, c = rng.randint(1, 4), rng.randint(1, 4)
            m = IntMatrix.from_rows(
                [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]
            )
            coeffs = [rng.randint(-4, 4) for _ in range(r)]
            target = [
                sum(coeffs[i] * m.entry(i, j) for i in range(r)) for j in range(c)
            ]
            x = solve_left(m, target)
            assert x is not None
            back = [sum(x[i] * m.entry(i, j) for i in range(r)) for j in range(c)]
            assert back == target

    def test_solve_left_unsolvable(self):
        m = IntMatrix.from_rows([[2, 0], [0, 2]])
        assert solve_left(m, [1, 0]) is None
        assert solve_left(m, [2, 2]) == (1, 1)

    def test_left_kernel(self):
        m = IntMatrix.from_rows([[1, 1], [1, 1], [2, 2]])
        k = left_kernel(m)
        assert k.rows == 2
        for i in range(k.rows):
            row = k.row(i)
            prod = [
                sum(row[a] * m.entry(a, j) for a in range(m.rows)) for j in range(m.cols)
            ]
            assert prod == [0, 0]

    def test_left_kernel_saturated(self):
        # kernel of [[2],[4]] is generated by (2,-1), a primitive vector
        m = IntMatrix.from_rows([[2], [4]])
        k = left_kernel(m)
        assert k.rows == 1
        assert gcd(k.entry(0, 0), k.entry(0, 1)) == 1


class TestFpGroup:
    def test_known_groups(self):
        g = fp_group(["a", "b"], [[2, 0], [0, 3]])
        assert g.invariant_factors == (6,)
        assert g.free_rank == 0
        assert g.order() == 6
        g = fp_group(["a", "b"], [[2, 2]])
        assert g.invariant_factors == (2,)
        assert g.free_rank == 1
        assert g.order() is None
        g = fp_group(["a"], [])
        assert g.describe() == "Z"
        g = fp_group([], [])
        assert g.describe() == "0"
        g = fp_group(["a", "b"], [[1, 0], [0, 1]])
        assert g.describe() == "0"

    def test_coordinate_map_and_is_zero_agree(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 4)
            r = rng.randint(0, 5)
            rel = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(r)]
            g = fp_group([f"g{i}" for i in range(n)], rel)
            for _ in range(20):
                vec = [rng.randint(-10, 10) for _ in range(n)]
                free, tors = g.coordinate_map(vec)
                assert g.is_zero(vec) == (not any(free) and not any(tors))
            # every relation row is zero
            for row in rel:
                assert g.is_zero(row)

    def test_coordinate_map_additive(self):
        g = fp_group(["a", "b", "c"], [[2, 0, 4], [0, 6, 0]])
        rng = random.Random(5)
        for _ in range(30):
            u = [rng.randint(-8, 8) for _ in range(3)]
            v = [rng.randint(-8, 8) for _ in range(3)]
            fu, tu = g.coordinate_map(u)
            fv, tv = g.coordinate_map(v)
            fs, ts = g.coordinate_map([a + b for a, b in zip(u, v)])
            assert fs == tuple(a + b for a, b in zip(fu, fv))
            assert all(
                (a + b - s) % d == 0
                for a, b, s, d in zip(tu, tv, ts, g.invariant_factors)
            )

    def test_order_equals_det_when_finite(self):
        rng = random.Random(31)
        found = 0
        while found < 25:
            n = rng.randint(1, 4)
            rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            dd = laplace_det(rows)
            if dd == 0:
                continue
            found += 1
            g = fp_group([f"g{i}" for i in range(n)], rows)
            assert g.order() == abs(dd)

    def test_permutation_invariance(self):
        rng = random.Random(13)
        for _ in range(20):
            n = rng.randint(2, 4)
            r = rng.randint(1, 5)
            rel = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(r)]
            g = fp_group([f"g{i}" for i in range(n)], rel)
            perm = list(range(n))
            rng.shuffle(perm)
            rel2 = [[row[perm[j]] for j in range(n)] for row in rel]
            g2 = fp_group([f"g{perm[j]}" for j in range(n)], rel2)
            assert g.invariant_factors == g2.invariant_factors
            assert g.free_rank == g2.free_rank

    def test_element_order(self):
        g = fp_group(["a", "b"], [[2, 0], [0, 3]])  # Z/6 via (a, b)
        assert g.element_order([0, 1]) == 3
        assert g.element_order([1, 0]) == 2
        assert g.element_order([1, 1]) == 6
        assert g.element_order([0, 0]) == 1
        h = fp_group(["a"], [])
        assert h.element_order([1]) is None
        assert h.element_order([0]) == 1

    def test_element_order_brute(self):
        rng = random.Random(41)
        for _ in range(15):
            n = rng.randint(1, 3)
            rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            if laplace_det(rows) == 0:
                continue
            g = fp_group([f"g{i}" for i in range(n)], rows)
            size = g.order()
            for _ in range(5):
                vec = [rng.randint(-6, 6) for _ in range(n)]
                k = next(
                    k
                    for k in range(1, size + 1)
                    if g.is_zero([k * x for x in vec])
                )
                assert g.element_order(vec) == k


class TestMaps:
    def test_mod_reduction(self):
        z4 = fp_group(["x"], [[4]])
        z2 = fp_group(["y"], [[2]])
        f = AbMap(z4, z2, [[1]])
        k, incl = fp_kernel(f)
        assert k.invariant_factors == (2,)
        assert k.free_rank == 0
        # the kernel generator includes to an element of order 2 killed by f
        vec = incl.apply([1])
        assert not z4.is_zero(vec)
        assert z2.is_zero(f.apply(vec))
        assert fp_image(f).describe() == "Z/2"
        assert fp_cokernel(f).describe() == "0"

    def test_multiplication_by_two(self):
        z = fp_group(["x"], [])
        f = AbMap(z, z, [[2]])
        k, _ = fp_kernel(f)
        assert k.describe() == "0"
        assert fp_image(f).describe() == "Z"
        assert fp_cokernel(f).describe() == "Z/2"

    def test_sum_map(self):
        z2f = fp_group(["x", "y"], [])
        z = fp_group(["z"], [])
        f = AbMap(z2f, z, [[1], [1]])
        k, incl = fp_kernel(f)
        assert k.describe() == "Z"
        vec = incl.apply([1])
        assert f.apply(vec) == (0,)

    def test_relation_not_killed(self):
        z2 = fp_group(["x"], [[2]])
        z = fp_group(["y"], [])
        with pytest.raises(RelationNotKilled):
            AbMap(z2, z, [[1]])

    def test_kernel_image_orders_multiply(self):
        rng = random.Random(59)
        checked = 0
        while checked < 20:
            n, m = rng.randint(1, 3), rng.randint(1, 3)
            src_rel = [[rng.randint(1, 6) if i == j else 0 for j in range(n)] for i in range(n)]
            tgt_rel = [[rng.randint(1, 6) if i == j else 0 for j in range(m)] for i in range(m)]
            src = fp_group([f"s{i}" for i in range(n)], src_rel)
            tgt = fp_group([f"t{i}" for i in range(m)], tgt_rel)
            imgs = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(n)]
            try:
                f = AbMap(src, tgt, imgs)
            except RelationNotKilled:
                continue
            checked += 1
            k, _ = fp_kernel(f)
            im = fp_image(f)
            ck = fp_cokernel(f)
            assert k.order() * im.order() == src.order()
            assert im.order() * ck.order() == tgt.order()

    def test_kernel_inclusion_exactness(self):
        # every kernel generator maps to zero; a non-kernel element does not
        z6 = fp_group(["x"], [[6]])
        z3 = fp_group(["y"], [[3]])
        f = AbMap(z6, z3, [[1]])
        k, incl = fp_kernel(f)
        assert k.describe() == "Z/2"
        for i in range(k.ngens):
            e = [0] * k.ngens
            e[i] = 1
            assert z3.is_zero(f.apply(incl.apply(e)))


class TestOddPartAndIntersection:
    def test_odd_part(self):
        g = fp_group(["a", "b"], [[12, 0], [0, 2]])
        o = odd_part(g)
        assert o.invariant_factors == (3,)
        assert o.free_rank == 0
        g = fp_group(["a", "b", "c"], [[6, 0, 0], [0, 2, 0]])
        o = odd_part(g)
        assert o.invariant_factors == (3,)
        assert o.free_rank == 1
        g = fp_group(["a"], [[8]])
        assert odd_part(g).describe() == "0"

    def test_lattice_intersection_lines(self):
        a = IntMatrix.from_rows([[2, 0]])
        b = IntMatrix.from_rows([[3, 0]])
        inter = lattice_intersection(a, b)
        h, _, rank = hnf(inter)
        assert rank == 1
        assert h.row(0) == (6, 0)

    def test_lattice_intersection_self(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(1, 3)
            r = rng.randint(1, 3)
            rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(r)]
            a = IntMatrix.from_rows(rows, cols=n)
            inter = lattice_intersection(a, a)
            ha = hnf(a, want_u=False)[0]
            hi = hnf(inter, want_u=False)[0]
            assert [r for r in ha.row_list() if any(r)] == [
                r for r in hi.row_list() if any(r)
            ]

    def test_lattice_intersection_membership(self):
        rng = random.Random(17)
        for _ in range(25):
            n = rng.randint(2, 4)
            a = IntMatrix.from_rows(
                [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(1, 3))],
                cols=n,
            )
            b = IntMatrix.from_rows(
                [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(1, 3))],
                cols=n,
            )
            inter = lattice_intersection(a, b)
            for i in range(inter.rows):
                v = inter.row(i)
                assert solve_left(a, v) is not None
                assert solve_left(b, v) is not None


class TestIntMatrix:
    def test_json_roundtrip(self):
        m = IntMatrix.from_rows([[10**30, -2], [0, 5]])
        obj = m.to_json()
        assert obj["entries"][0] == str(10**30)
        assert all(isinstance(e, str) for e in obj["entries"])
        assert IntMatrix.from_json(obj) == m

    def test_immutable(self):
        m = IntMatrix.identity(2)
        with pytest.raises(AttributeError):
            m.rows = 3

    def test_det(self):
        rng = random.Random(29)
        for _ in range(40):
            n = rng.randint(0, 4)
            rows = [[rng.randint(-7, 7) for _ in range(n)] for _ in range(n)]
            assert det(IntMatrix.from_rows(rows, cols=n)) == laplace_det(rows)

    def test_stack_and_mul(self):
        a = IntMatrix.from_rows([[1, 2]])
        b = IntMatrix.from_rows([[3, 4]])
        s = a.stack(b)
        assert s.row_list() == [(1, 2), (3, 4)]
        p = s.mul(IntMatrix.identity(2))
        assert p == s
