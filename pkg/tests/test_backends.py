"""The compiled and pure kernels must agree entrywise whenever the
compiled one completes, and must hand off cleanly on 64-bit overflow."""

import random

import pytest

from kmw import _snf_py
from kmw import exact_linear as el

core = pytest.importorskip("kmw._snf_core")


def random_cases(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        mag = rng.choice([3, 10, 1000, 10**6])
        yield r, c, [rng.randint(-mag, mag) for _ in range(r * c)]


def test_snf_parity():
    ok = 0
    for r, c, flat in random_cases(101, 120):
        try:
            got = core.snf_kernel(flat, r, c, True, True)
        except core.Overflow:
            continue
        ok += 1
        assert got == _snf_py.snf_kernel(flat, r, c, True, True)
    assert ok > 60  # overflow must stay the exception, not the rule


def test_snf_parity_no_transforms():
    ok = 0
    for r, c, flat in random_cases(103, 40):
        try:
            got = core.snf_kernel(flat, r, c, False, True)
        except core.Overflow:
            continue
        ok += 1
        assert got == _snf_py.snf_kernel(flat, r, c, False, True)
    assert ok > 25


def test_hnf_parity():
    ok = 0
    for r, c, flat in random_cases(107, 120):
        try:
            got = core.hnf_kernel(flat, r, c, True)
        except core.Overflow:
            continue
        ok += 1
        assert got == _snf_py.hnf_kernel(flat, r, c, True)
    assert ok > 80


def test_overflow_raises():
    big = 2**70
    with pytest.raises(core.Overflow):
        core.snf_kernel([big, 1, 1, big], 2, 2, True, True)


def test_dispatch_falls_back_on_overflow():
    big = 2**70
    m = el.IntMatrix.from_rows([[big, 1], [1, big]])
    d, u, v = el.snf(m)
    assert u.mul(m).mul(v) == d
    h, u2, rank = el.hnf(m)
    assert u2.mul(m) == h
    assert rank == 2
