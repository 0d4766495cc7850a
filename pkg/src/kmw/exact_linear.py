"""Exact integer linear algebra and finitely presented abelian groups.

Everything downstream reduces to this module: Smith/Hermite normal forms
over Z, lattice membership, and the presentation calculus (kernels,
images, cokernels of maps between finitely presented abelian groups).

Two interchangeable kernel backends exist: a compiled 64-bit extension
and pure-Python arbitrary precision.  They implement the identical pivot
rule, so results agree entrywise; the compiled path falls back per call
when an intermediate would overflow 64 bits.  Set ``KMW_PURE_PYTHON=1``
to force the pure backend.
"""

from __future__ import annotations

import os
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from . import _snf_py
from .errors import IntegrityFailure, RelationNotKilled

try:
    from . import _snf_core as _core
except ImportError:  # extension not built
    _core = None

if os.environ.get("KMW_PURE_PYTHON"):
    _core = None

#: True when the compiled kernel backend is in use.
COMPILED_BACKEND = _core is not None


def _snf_raw(entries, rows, cols, want_u=True, want_v=True):
    if _core is not None:
        try:
            return _core.snf_kernel(list(entries), rows, cols, want_u, want_v)
        except _core.Overflow:
            pass
    return _snf_py.snf_kernel(entries, rows, cols, want_u, want_v)


def _hnf_raw(entries, rows, cols, want_u=True):
    if _core is not None:
        try:
            return _core.hnf_kernel(list(entries), rows, cols, want_u)
        except _core.Overflow:
            pass
    return _snf_py.hnf_kernel(entries, rows, cols, want_u)


class IntMatrix:
    """Immutable integer matrix, stored flat row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        entries = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ValueError("matrix shape does not match entry count")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0]) if cols is None else cols
            if any(len(r) != cols for r in rows):
                raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        flat = [x for r in rows for x in r]
        return cls(len(rows), cols, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, _snf_py._identity(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_list(self) -> list[tuple[int, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        out = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.entries[i * self.cols + j]
        return IntMatrix(self.cols, self.rows, out)

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out = [0] * (self.rows * other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                x = self.entries[base + k]
                if x:
                    ob = k * other.cols
                    tb = i * other.cols
                    for j in range(other.cols):
                        out[tb + j] += x * other.entries[ob + j]
        return IntMatrix(self.rows, other.cols, out)

    __matmul__ = mul

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i * self.cols + j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + i] for i in range(min(self.rows, self.cols)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 36:
            body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
            return f"IntMatrix({self.rows}x{self.cols}: {body})"
        return f"IntMatrix({self.rows}x{self.cols})"

    def to_json(self) -> dict:
        # entries as decimal strings: JSON consumers must not lose precision
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [str(x) for x in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntMatrix":
        return cls(int(obj["rows"]), int(obj["cols"]), [int(x) for x in obj["entries"]])


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (D, U, V) with U*m*V = D, U and V
    unimodular, D diagonal with nonnegative entries in a divisibility
    chain."""
    d, u, v = _snf_raw(m.entries, m.rows, m.cols, True, True)
    return (
        IntMatrix(m.rows, m.cols, d),
        IntMatrix(m.rows, m.rows, u),
        IntMatrix(m.cols, m.cols, v),
    )


def hnf(m: IntMatrix, want_u: bool = True):
    """Row Hermite normal form: returns (H, U, rank) with U*m = H."""
    h, u, r = _hnf_raw(m.entries, m.rows, m.cols, want_u)
    return (
        IntMatrix(m.rows, m.cols, h),
        IntMatrix(m.rows, m.rows, u) if want_u else None,
        r,
    )


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(m.row(i)) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _pivot_data(h_rows: list[tuple[int, ...]], rank: int):
    # (row, pivot column, pivot value) for each nonzero HNF row
    out = []
    for i in range(rank):
        row = h_rows[i]
        for c, x in enumerate(row):
            if x:
                out.append((row, c, x))
                break
    return out


def _member(pivots, vec: Sequence[int]) -> Optional[list[int]]:
    """Coefficients expressing vec over HNF basis rows, or None."""
    rem = list(vec)
    coeffs = []
    for row, c, p in pivots:
        x = rem[c]
        if x:
            q, r = divmod(x, p)
            if r:
                return None
            for k in range(c, len(rem)):
                rem[k] -= q * row[k]
            coeffs.append(q)
        else:
            coeffs.append(0)
    if any(rem):
        return None
    return coeffs


def left_kernel(m: IntMatrix) -> IntMatrix:
    """Basis (as rows) of {x in Z^rows : x*m = 0}; saturated since it
    comes from a unimodular transform."""
    _, u, r = hnf(m, want_u=True)
    rows = [u.row(i) for i in range(r, m.rows)]
    return IntMatrix.from_rows(rows, cols=m.rows)


def solve_left(m: IntMatrix, target: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some x with x*m = target, or None if target is outside the row
    lattice of m."""
    target = [int(t) for t in target]
    if len(target) != m.cols:
        raise ValueError("target length does not match column count")
    h, u, r = hnf(m, want_u=True)
    coeffs = _member(_pivot_data(h.row_list(), r), target)
    if coeffs is None:
        return None
    x = [0] * m.rows
    for i, c in enumerate(coeffs):
        if c:
            urow = u.row(i)
            for k in range(m.rows):
                x[k] += c * urow[k]
    return tuple(x)


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Generators (rows) of rowspace(a) ∩ rowspace(b) in Z^n."""
    if a.cols != b.cols:
        raise ValueError("ambient ranks differ")
    stacked = a.stack(b)
    kern = left_kernel(stacked)
    rows = []
    for i in range(kern.rows):
        krow = kern.row(i)
        vec = [0] * a.cols
        for j in range(a.rows):
            c = krow[j]
            if c:
                arow = a.row(j)
                for k in range(a.cols):
                    vec[k] += c * arow[k]
        if any(vec):
            rows.append(vec)
    return IntMatrix.from_rows(rows, cols=a.cols)


class AbGroupInfo:
    """A finitely presented abelian group Z^n / (row lattice).

    Carries the presentation plus enough of its normal-form data to give
    canonical coordinates: ``coordinate_map`` sends a generator-exponent
    vector to its image in Z^free ⊕ ⊕_i Z/d_i, and ``is_zero`` decides
    lattice membership directly from a Hermite basis (the two agree; the
    tests cross-check them)."""

    def __init__(self, labels: Sequence[str], relations: IntMatrix):
        labels = tuple(str(s) for s in labels)
        if relations.cols != len(labels):
            raise ValueError("relation width does not match generator count")
        self.generator_labels = labels
        self.relation_matrix = relations
        n = relations.cols

        d_flat, _, v = _snf_raw(relations.entries, relations.rows, n, False, True)
        diag = [0] * n
        for j in range(min(relations.rows, n)):
            diag[j] = d_flat[j * n + j]
        self._diag = tuple(diag)
        self._v_rows = tuple(
            tuple(v[i * n + j] for j in range(n)) for i in range(n)
        )
        self._free_cols = tuple(j for j in range(n) if diag[j] == 0)
        self._tor_cols = tuple(j for j in range(n) if diag[j] >= 2)
        self.invariant_factors = tuple(diag[j] for j in self._tor_cols)
        self.free_rank = len(self._free_cols)

        h_flat, _, rank = _hnf_raw(relations.entries, relations.rows, n, False)
        h_rows = [tuple(h_flat[i * n + j] for j in range(n)) for i in range(rank)]
        self._pivots = _pivot_data(h_rows, rank)
        if rank != n - self.free_rank:
            raise IntegrityFailure("normal forms disagree on rank")

    @property
    def ngens(self) -> int:
        return len(self.generator_labels)

    def label_index(self, label: str) -> int:
        return self.generator_labels.index(label)

    def coordinate_map(self, vec: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Canonical coordinates (free part, torsion part) of a vector of
        generator exponents."""
        vec = list(vec)
        if len(vec) != self.ngens:
            raise ValueError("vector length does not match generator count")
        n = self.ngens
        y = [0] * n
        for i, x in enumerate(vec):
            if x:
                vrow = self._v_rows[i]
                for j in range(n):
                    y[j] += x * vrow[j]
        free = tuple(y[j] for j in self._free_cols)
        tors = tuple(y[j] % self._diag[j] for j in self._tor_cols)
        return free, tors

    def is_zero(self, vec: Sequence[int]) -> bool:
        vec = list(vec)
        if len(vec) != self.ngens:
            raise ValueError("vector length does not match generator count")
        return _member(self._pivots, vec) is not None

    def element_order(self, vec: Sequence[int]) -> Optional[int]:
        """Order of the class of ``vec``; None when infinite."""
        free, tors = self.coordinate_map(vec)
        if any(free):
            return None
        out = 1
        for j, y in zip(self._tor_cols, tors):
            if y:
                d = self._diag[j]
                out = lcm(out, d // gcd(d, y))
        return out

    def order(self) -> Optional[int]:
        """Group order; None when infinite."""
        if self.free_rank:
            return None
        return self.torsion_order()

    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def exponent(self) -> Optional[int]:
        if self.free_rank:
            return None
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"AbGroupInfo({self.describe()}, {self.ngens} gens)"


def fp_group(labels: Sequence[str], relations) -> AbGroupInfo:
    """Finitely presented abelian group on ``labels`` modulo the rows of
    ``relations`` (an IntMatrix or an iterable of rows)."""
    if not isinstance(relations, IntMatrix):
        relations = IntMatrix.from_rows(relations, cols=len(labels))
    return AbGroupInfo(labels, relations)


class AbMap:
    """Homomorphism between finitely presented abelian groups, given on
    generators; construction verifies every source relation dies in the
    target."""

    def __init__(self, source: AbGroupInfo, target: AbGroupInfo, images):
        if not isinstance(images, IntMatrix):
            images = IntMatrix.from_rows(images, cols=target.ngens)
        if images.rows != source.ngens or images.cols != target.ngens:
            raise ValueError("image matrix shape does not match source/target")
        self.source = source
        self.target = target
        self.images = images
        rel = source.relation_matrix
        for i in range(rel.rows):
            vec = self.apply(rel.row(i))
            if not target.is_zero(vec):
                raise RelationNotKilled(
                    f"source relation {i} maps to a nonzero target element"
                )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        vec = list(vec)
        if len(vec) != self.source.ngens:
            raise ValueError("vector length does not match source generators")
        out = [0] * self.target.ngens
        for i, x in enumerate(vec):
            if x:
                irow = self.images.row(i)
                for j in range(self.target.ngens):
                    out[j] += x * irow[j]
        return tuple(out)

    def __repr__(self) -> str:
        return f"AbMap({self.source.describe()} -> {self.target.describe()})"


def fp_kernel(f: AbMap) -> tuple[AbGroupInfo, AbMap]:
    """Kernel of ``f`` as a presented group plus its inclusion into the
    source.

    The kernel subgroup of Z^n is the projection of the left kernel of
    the stacked matrix [images; target relations]; its own relations are
    the coefficient vectors landing in the source relation lattice."""
    n = f.source.ngens
    stacked = f.images.stack(f.target.relation_matrix)
    kb = left_kernel(stacked)
    gen_rows = []
    for i in range(kb.rows):
        row = kb.row(i)[:n]
        if any(row):
            gen_rows.append(row)
    gens = IntMatrix.from_rows(gen_rows, cols=n)

    k = gens.rows
    stacked2 = gens.stack(f.source.relation_matrix)
    kb2 = left_kernel(stacked2)
    rel_rows = []
    for i in range(kb2.rows):
        row = kb2.row(i)[:k]
        if any(row):
            rel_rows.append(row)
    labels = tuple(f"k{i}" for i in range(k))
    kern = AbGroupInfo(labels, IntMatrix.from_rows(rel_rows, cols=k))
    incl = AbMap(kern, f.source, gens)
    return kern, incl


def fp_image(f: AbMap) -> AbGroupInfo:
    """Image of ``f`` presented on the source generators (isomorphic to
    source modulo the kernel lattice)."""
    n = f.source.ngens
    stacked = f.images.stack(f.target.relation_matrix)
    kb = left_kernel(stacked)
    rel_rows = []
    for i in range(kb.rows):
        row = kb.row(i)[:n]
        if any(row):
            rel_rows.append(row)
    return AbGroupInfo(f.source.generator_labels, IntMatrix.from_rows(rel_rows, cols=n))


def fp_cokernel(f: AbMap) -> AbGroupInfo:
    """Cokernel of ``f``: the target with the image rows adjoined as
    relations."""
    rels = f.target.relation_matrix.stack(f.images)
    return AbGroupInfo(f.target.generator_labels, rels)


def odd_part(g: AbGroupInfo) -> AbGroupInfo:
    """The group modulo its 2-primary torsion: same free rank, each
    invariant factor replaced by its odd part."""
    odds = []
    for d in g.invariant_factors:
        while d % 2 == 0:
            d //= 2
        if d > 1:
            odds.append(d)
    labels = [f"g{i}" for i in range(len(odds))] + [f"f{i}" for i in range(g.free_rank)]
    n = len(labels)
    rows = []
    for i, d in enumerate(odds):
        row = [0] * n
        row[i] = d
        rows.append(row)
    return AbGroupInfo(tuple(labels), IntMatrix.from_rows(rows, cols=n))
