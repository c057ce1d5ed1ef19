"""Exact integer linear algebra.

Dense integer matrices, Hermite and Smith normal forms, lattices in Z^n
stored as column-HNF bases, and finitely generated abelian groups in
invariant-factor form. Everything is plain Python ``int``; nothing here
ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Optional, Sequence

from .errors import NeronError

Vector = tuple


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "entries", tuple(_as_int(x) for x in self.entries))

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int):
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column of wrong length")
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(nrows)], ncols=len(columns)
        )

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int], shape=None):
        rows, cols = shape if shape is not None else (len(values), len(values))
        out = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(values):
            out[i][i] = x
        return cls.from_rows(out, ncols=cols)

    # access

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [self.col(j) for j in range(self.cols)], ncols=self.rows
        )

    # arithmetic

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise NeronError(
                    "DIMENSION_MISMATCH", f"cannot multiply {self.shape} by {other.shape}"
                )
            ocols = other.columns()
            return IntMatrix.from_rows(
                [[_dot(self.row(i), c) for c in ocols] for i in range(self.rows)],
                ncols=other.cols,
            )
        return self.apply(other)

    def apply(self, x: Sequence[int]) -> Vector:
        if len(x) != self.cols:
            raise NeronError("DIMENSION_MISMATCH", f"vector of length {len(x)} for {self.shape}")
        return tuple(_dot(self.row(i), x) for i in range(self.rows))

    def __add__(self, other: "IntMatrix"):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix"):
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, k: int):
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if self.rows != self.cols or k < 0:
            raise ValueError("matrix power needs a square matrix and k >= 0")
        out, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise NeronError("DIMENSION_MISMATCH", "hstack of matrices with different row counts")
        return IntMatrix.from_rows(
            [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
            ncols=self.cols + other.cols,
        )

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise NeronError("DIMENSION_MISMATCH", f"{self.shape} vs {other.shape}")

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        if hasattr(x, "__index__") and not isinstance(x, bool):
            return x.__index__()
        raise TypeError(f"non-integer matrix entry {x!r}")
    return x


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def as_matrix(a) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a)


# ---------------------------------------------------------------------------
# Hermite normal form


def _row_hnf(rows: list, ncols: int, transform: bool = False):
    """Row-style HNF by repeated minimal-pivot division.

    Returns ``(h, u, rank)`` with ``u @ rows == h``; the first ``rank`` rows
    of ``h`` are the echelon rows, the rest are zero. ``u`` is None unless
    ``transform`` is set.
    """
    a = [list(r) for r in rows]
    n = len(a)
    u = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None
    r = 0
    for c in range(ncols):
        if r == n:
            break
        found = False
        while True:
            piv = None
            for i in range(r, n):
                if a[i][c] and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                    piv = i
            if piv is None:
                break
            found = True
            if piv != r:
                a[r], a[piv] = a[piv], a[r]
                if u is not None:
                    u[r], u[piv] = u[piv], u[r]
            p = a[r][c]
            clean = True
            for i in range(r + 1, n):
                if a[i][c]:
                    q = a[i][c] // p
                    _row_sub(a[i], a[r], q)
                    if u is not None:
                        _row_sub(u[i], u[r], q)
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                _row_sub(a[i], a[r], q)
                if u is not None:
                    _row_sub(u[i], u[r], q)
        r += 1
    return a, u, r


def _row_sub(target: list, source: list, q: int) -> None:
    for k, s in enumerate(source):
        if s:
            target[k] -= q * s


def _hnf_columns(a: IntMatrix) -> list:
    h, _, rank = _row_hnf([a.col(j) for j in range(a.cols)], a.rows)
    return [tuple(x) for x in h[:rank]]


def hnf(a: IntMatrix) -> IntMatrix:
    """Column Hermite normal form of ``a``.

    Same shape as ``a``: the nonzero HNF columns come first, padded with
    zero columns. Each column has a positive leading entry strictly below
    the previous one, and entries of earlier columns in a pivot row are
    reduced into ``[0, pivot)``.
    """
    cols = _hnf_columns(a)
    cols += [(0,) * a.rows] * (a.cols - len(cols))
    return IntMatrix.from_columns(cols, a.rows)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.s[i, i] for i in range(min(self.s.rows, self.s.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def snf(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms: ``u @ a @ v == s``.

    Pivot is always the entry of least nonzero absolute value in the
    remaining block, first in row-major order, so transforms are
    reproducible.
    """
    m, n = a.rows, a.cols
    s = a.to_rows()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(mat, i, j):
        for r in mat:
            r[i], r[j] = r[j], r[i]

    def sub_col(mat, target, source, q):
        for r in mat:
            if r[source]:
                r[target] -= q * r[source]

    for t in range(min(m, n)):
        while True:
            best, best_abs = None, 0
            for i in range(t, m):
                row = s[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best_abs):
                        best, best_abs = (i, j), abs(x)
            if best is None:
                break
            i, j = best
            if i != t:
                s[t], s[i] = s[i], s[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                swap_cols(s, t, j)
                swap_cols(v, t, j)
            p = s[t][t]
            clean = True
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // p
                    _row_sub(s[i], s[t], q)
                    _row_sub(u[i], u[t], q)
                    if s[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // p
                    sub_col(s, j, t, q)
                    sub_col(v, j, t, q)
                    if s[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t; next pass shrinks the pivot
            _row_sub(s[t], s[bad], -1)
            _row_sub(u[t], u[bad], -1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        if best is None:
            break

    return SmithDecomposition(
        IntMatrix.from_rows(u, ncols=m),
        IntMatrix.from_rows(s, ncols=n),
        IntMatrix.from_rows(v, ncols=n),
    )


def solve(a: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """Some integer ``x`` with ``a @ x == b``, or None if there is none."""
    if len(b) != a.rows:
        raise NeronError("DIMENSION_MISMATCH", f"right-hand side of length {len(b)} for {a.shape}")
    dec = snf(a)
    z = dec.u.apply(b)
    y = [0] * a.cols
    for i, zi in enumerate(z):
        si = dec.s[i, i] if i < a.cols else 0
        if si == 0:
            if zi:
                return None
        else:
            if zi % si:
                return None
            y[i] = zi // si
    return dec.v.apply(y)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """Z^free_rank + Z/f1 + ... + Z/fk with f1 | f2 | ... | fk, each fi >= 2."""

    free_rank: int = 0
    invariant_factors: tuple = ()

    def __post_init__(self):
        factors = tuple(_as_int(f) for f in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for f in factors:
            if f < 2:
                raise ValueError(f"invariant factor {f} < 2")
        for f, g in zip(factors, factors[1:]):
            if g % f:
                raise ValueError(f"invariant factors {factors} are not a divisibility chain")

    @classmethod
    def trivial(cls):
        return cls()

    @classmethod
    def cyclic(cls, n: int):
        n = abs(n)
        if n == 0:
            return cls(1)
        return cls(0, (n,) if n > 1 else ())

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], extra_free: int = 0):
        """Group from Smith diagonal entries; zeros count as free summands."""
        diagonal = [abs(x) for x in diagonal]
        free = extra_free + sum(1 for x in diagonal if x == 0)
        return cls(free, tuple(x for x in diagonal if x > 1))

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0):
        """Normalize a direct sum of cyclic groups, e.g. Z/2 + Z/3 -> Z/6."""
        orders = [abs(o) for o in orders]
        free = free_rank + sum(1 for o in orders if o == 0)
        finite = [o for o in orders if o > 1]
        if not finite:
            return cls(free)
        return cls.from_diagonal(snf(IntMatrix.diag(finite)).diagonal, free)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError(f"{self} is infinite")
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        if self.free_rank:
            raise ValueError(f"{self} is infinite")
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{f}" for f in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    @classmethod
    def from_dict(cls, data: dict):
        return cls(data["free_rank"], tuple(data["invariant_factors"]))


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_rank; ``basis`` columns are kept in column HNF.

    Any spanning set may be passed as ``basis``; dependent columns are
    absorbed, so two lattices compare equal iff they are the same subgroup.
    """

    ambient_rank: int
    basis: IntMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_rank:
            raise NeronError(
                "DIMENSION_MISMATCH",
                f"basis has {self.basis.rows} rows, ambient rank is {self.ambient_rank}",
            )
        object.__setattr__(
            self, "basis", IntMatrix.from_columns(_hnf_columns(self.basis), self.ambient_rank)
        )

    @classmethod
    def spanned_by(cls, ambient_rank: int, generators: Iterable[Sequence[int]]):
        return cls(ambient_rank, IntMatrix.from_columns(list(generators), ambient_rank))

    @classmethod
    def full(cls, n: int):
        return cls(n, IntMatrix.identity(n))

    @classmethod
    def zero(cls, n: int):
        return cls(n, IntMatrix.zeros(n, 0))

    @property
    def rank(self) -> int:
        return self.basis.cols

    def columns(self) -> list:
        return self.basis.columns()

    def __contains__(self, x) -> bool:
        return coords_in_lattice(self, x) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(c in self for c in other.columns())

    def __add__(self, other: "Lattice") -> "Lattice":
        if self.ambient_rank != other.ambient_rank:
            raise NeronError("DIMENSION_MISMATCH", "sum of lattices in different ambient spaces")
        return Lattice(self.ambient_rank, self.basis.hstack(other.basis))

    def __and__(self, other: "Lattice") -> "Lattice":
        return preimage_lattice(self, IntMatrix.identity(self.ambient_rank), other)

    def image_under(self, f: IntMatrix) -> "Lattice":
        if f.cols != self.ambient_rank:
            raise NeronError("DIMENSION_MISMATCH", f"map {f.shape} on Z^{self.ambient_rank}")
        return Lattice(f.rows, f @ self.basis)

    def is_stable_under(self, f: IntMatrix) -> bool:
        return all(f.apply(c) in self for c in self.columns())

    def is_saturated(self) -> bool:
        return all(x == 1 for x in snf(self.basis).diagonal)


def kernel_lattice(a: IntMatrix) -> Lattice:
    """{x in Z^cols : a x = 0}; always saturated."""
    _, u, rank = _row_hnf([a.col(j) for j in range(a.cols)], a.rows, transform=True)
    return Lattice.spanned_by(a.cols, u[rank:])


def image_lattice(a: IntMatrix) -> Lattice:
    return Lattice(a.rows, a)


def coords_in_lattice(l: Lattice, x: Sequence[int]) -> Optional[Vector]:
    """Coordinates ``c`` with ``l.basis @ c == x``, or None when x is not in l."""
    if len(x) != l.ambient_rank:
        raise NeronError("DIMENSION_MISMATCH", f"vector of length {len(x)} in Z^{l.ambient_rank}")
    residual = list(x)
    coords = []
    for col in l.columns():
        p = next(i for i, v in enumerate(col) if v)
        if residual[p] % col[p]:
            return None
        c = residual[p] // col[p]
        coords.append(c)
        if c:
            for i in range(p, len(col)):
                residual[i] -= c * col[i]
    if any(residual):
        return None
    return tuple(coords)


def coordinate_matrix(l: Lattice, m: Lattice) -> IntMatrix:
    """Columns are the coordinates of m's basis in l's basis."""
    if l.ambient_rank != m.ambient_rank:
        raise NeronError("DIMENSION_MISMATCH", "lattices live in different ambient spaces")
    cols = []
    for j, v in enumerate(m.columns()):
        c = coords_in_lattice(l, v)
        if c is None:
            raise NeronError("NOT_SUBLATTICE", f"generator {j} = {v} is not in the larger lattice")
        cols.append(c)
    return IntMatrix.from_columns(cols, l.rank)


def quotient_group(l: Lattice, m: Lattice) -> FinAbGroup:
    """l/m in invariant-factor form; requires m inside l."""
    c = coordinate_matrix(l, m)
    dec = snf(c)
    return FinAbGroup.from_diagonal(dec.diagonal, extra_free=l.rank - min(c.rows, c.cols))


def preimage_lattice(l: Lattice, f: IntMatrix, m: Lattice) -> Lattice:
    """{x in l : f x in m}."""
    if f.cols != l.ambient_rank or f.rows != m.ambient_rank:
        raise NeronError(
            "DIMENSION_MISMATCH",
            f"map {f.shape} does not go from Z^{l.ambient_rank} to Z^{m.ambient_rank}",
        )
    system = (f @ l.basis).hstack(-m.basis)
    sols = kernel_lattice(system).columns()
    return Lattice.spanned_by(l.ambient_rank, [l.basis.apply(s[:l.rank]) for s in sols])


def index(l: Lattice, m: Lattice) -> int:
    """[l : m] for a full-rank sublattice m of l."""
    return quotient_group(l, m).order
