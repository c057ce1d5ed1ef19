"""Special fibres of regular curve models with a Galois permutation.

A fibre is given over the separable closure. Each geometric component
carries a multiplicity ``d``, a geometric multiplicity ``e`` and its row of
the symmetric intersection matrix. A generator of the (cyclic) Galois group
moves components by the permutation ``sigma``: ``sigma[a]`` is the image of
component ``a``. Orbit data over the ground field is derived.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Optional, Sequence

from .cyccoh import cyclic_generator, permutation_matrix
from .errors import NeronError, ValidationError, ValidationReport
from .zlattice import IntMatrix


@dataclass(frozen=True)
class GeomComponent:
    id: int
    d: int
    e: int
    self_and_cross: tuple


@dataclass(frozen=True)
class SpecialFibre:
    components: tuple
    sigma: tuple
    genus: Optional[int] = None
    hypothesis_flag: bool = True

    @classmethod
    def from_data(
        cls,
        intersections,
        sigma=None,
        d=None,
        e=None,
        genus=None,
        hypothesis_ok=True,
    ):
        """Build a fibre from plain lists.

        ``sigma`` may be a single permutation or a list of permutations
        generating a cyclic group (NOT_CYCLIC otherwise); None means trivial.
        """
        rows = [tuple(r) for r in intersections]
        n = len(rows)
        d = [1] * n if d is None else list(d)
        e = [1] * n if e is None else list(e)
        if len(d) != n or len(e) != n:
            raise ValidationError([("BAD_SHAPE", "multiplicity lists do not match the matrix size")])
        if sigma is None:
            perm = tuple(range(n))
        elif sigma and isinstance(sigma[0], (list, tuple)):
            ident = tuple(range(n))
            gens = [tuple(p) for p in sigma]
            for p in gens:
                _check_permutation(p, n)
            perm = cyclic_generator(gens, lambda p, q: tuple(p[q[a]] for a in range(n)), ident)
        else:
            perm = tuple(sigma)
        comps = tuple(GeomComponent(i, d[i], e[i], rows[i]) for i in range(n))
        return cls(comps, perm, genus, hypothesis_ok)

    # basic data

    @property
    def n(self) -> int:
        return len(self.components)

    @cached_property
    def intersection_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows([c.self_and_cross for c in self.components], ncols=self.n)

    @property
    def d(self) -> tuple:
        return tuple(c.d for c in self.components)

    @property
    def e(self) -> tuple:
        return tuple(c.e for c in self.components)

    @cached_property
    def sigma_matrix(self) -> IntMatrix:
        return permutation_matrix(self.sigma)

    @cached_property
    def orbits(self) -> tuple:
        """Orbits as tuples (rep, sigma(rep), sigma^2(rep), ...), rep = least index."""
        seen = set()
        out = []
        for a in range(self.n):
            if a in seen:
                continue
            orbit = [a]
            b = self.sigma[a]
            while b != a:
                orbit.append(b)
                b = self.sigma[b]
            seen.update(orbit)
            out.append(tuple(orbit))
        return tuple(out)

    @property
    def order_m(self) -> int:
        return reduce(lcm, (len(o) for o in self.orbits), 1)

    def relabel(self, perm: Sequence[int]) -> "SpecialFibre":
        """Same fibre with component a renamed perm[a]."""
        n = self.n
        inv = [0] * n
        for a, b in enumerate(perm):
            inv[b] = a
        m = self.intersection_matrix
        rows = [[m[inv[x], inv[y]] for y in range(n)] for x in range(n)]
        sigma = [perm[self.sigma[inv[x]]] for x in range(n)]
        return SpecialFibre.from_data(
            rows,
            sigma,
            [self.d[inv[x]] for x in range(n)],
            [self.e[inv[x]] for x in range(n)],
            self.genus,
            self.hypothesis_flag,
        )


def _check_permutation(p, n):
    if len(p) != n or sorted(p) != list(range(n)):
        raise ValidationError([("BAD_SHAPE", f"sigma {list(p)} is not a permutation of 0..{n - 1}")])


# ---------------------------------------------------------------------------
# validation


def validate(f: SpecialFibre) -> ValidationReport:
    rep = ValidationReport()
    add = rep.issues.append
    n = f.n
    if n == 0:
        add(("BAD_SHAPE", "fibre has no components"))
        return rep
    try:
        _check_permutation(f.sigma, n)
    except ValidationError as err:
        rep.issues += err.issues
    for c in f.components:
        if len(c.self_and_cross) != n:
            add(("BAD_SHAPE", f"row {c.id} has length {len(c.self_and_cross)}, expected {n}"))
        if c.d < 1 or c.e < 1:
            add(("BAD_MULTIPLICITY", f"component {c.id} has d={c.d}, e={c.e}"))
    if f.genus is not None and f.genus < 0:
        add(("BAD_SHAPE", f"negative genus {f.genus}"))
    if rep.issues:
        return rep

    m = f.intersection_matrix
    s = f.sigma
    d, e = f.d, f.e
    if not m.is_symmetric():
        add(("ASYMMETRIC", "intersection matrix is not symmetric"))
    neg = [(a, b) for a in range(n) for b in range(n) if a != b and m[a, b] < 0]
    if neg:
        add(("NEGATIVE_INTERSECTION", f"distinct components with negative intersection at {neg[0]}"))
    bad = [(a, b) for a in range(n) for b in range(n) if m[s[a], s[b]] != m[a, b]]
    if bad:
        add(("NOT_EQUIVARIANT", f"M[sigma a][sigma b] != M[a][b] at {bad[0]}"))
    varies = [a for a in range(n) if d[s[a]] != d[a] or e[s[a]] != e[a]]
    if varies:
        add(("ORBIT_DATA_VARIES", f"d or e changes along the orbit of component {varies[0]}"))
    sums = [sum(d[b] * m[a, b] for b in range(n)) for a in range(n)]
    nonzero = [a for a in range(n) if sums[a]]
    if nonzero:
        a = nonzero[0]
        add(("ROW_SUM_NONZERO", f"sum_b d_b M[{a}][b] = {sums[a]}"))
    ediv = [(a, b) for a in range(n) for b in range(n) if m[a, b] % e[b]]
    if ediv:
        a, b = ediv[0]
        add(("E_DIVISIBILITY", f"e_{b} = {e[b]} does not divide M[{a}][{b}] = {m[a, b]}"))
    if not _connected(m):
        add(("DISCONNECTED", "dual graph is not connected"))

    if f.genus is not None and not rep.issues:
        dd, dprime = gcd_invariants(f)
        g = f.genus
        if (g - 1) % dd:
            add(("GENUS_D", f"d = {dd} does not divide g - 1 = {g - 1}"))
        if (2 * g - 2) % dprime:
            add(("GENUS_DPRIME", f"d' = {dprime} does not divide 2g - 2 = {2 * g - 2}"))

    if not f.hypothesis_flag:
        rep.warnings.append(
            ("HYPOTHESIS_UNASSERTED", "perfect residue field / etale quasi-section not asserted")
        )
    if m.is_symmetric() and not _is_neg_semidefinite(m):
        rep.warnings.append(("NOT_NEG_SEMIDEFINITE", "intersection matrix is not negative semidefinite"))
    return rep


def require_valid(f: SpecialFibre) -> SpecialFibre:
    validate(f).raise_for_errors()
    return f


def _connected(m: IntMatrix) -> bool:
    n = m.rows
    seen = {0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in range(n):
            if b not in seen and m[a, b] > 0:
                seen.add(b)
                stack.append(b)
    return len(seen) == n


def _is_neg_semidefinite(m: IntMatrix) -> bool:
    n = m.rows
    a = [[-Fraction(m[i, j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[k][j] for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            if a[i][k]:
                ratio = a[i][k] / p
                for j in range(k + 1, n):
                    a[i][j] -= ratio * a[k][j]
    return True


# ---------------------------------------------------------------------------
# geometric maps


def alpha_bar(f: SpecialFibre) -> IntMatrix:
    """Weighted intersection map on Z^(geometric components): entry (j, v) = M[v][j] / e_j."""
    m, e = f.intersection_matrix, f.e
    return IntMatrix.from_rows(
        [[_exact_div(m[v, j], e[j]) for v in range(f.n)] for j in range(f.n)], ncols=f.n
    )


def beta_bar(f: SpecialFibre) -> IntMatrix:
    return IntMatrix.from_rows([[dj * ej for dj, ej in zip(f.d, f.e)]], ncols=f.n)


def _exact_div(a: int, b: int) -> int:
    if a % b:
        raise NeronError("INTEGRALITY", f"{b} does not divide {a}")
    return a // b


# ---------------------------------------------------------------------------
# ground-field level


@dataclass(frozen=True)
class OrbitSummary:
    orbit_reps: tuple
    r: tuple
    k_intersections: IntMatrix
    orbits: tuple


def k_level(f: SpecialFibre) -> OrbitSummary:
    m = f.intersection_matrix
    orbits = f.orbits
    k = [[sum(m[a, b] for a in oi for b in ol) for ol in orbits] for oi in orbits]
    for i, oi in enumerate(orbits):
        for l, ol in enumerate(orbits):
            single = sum(m[oi[0], b] for b in ol)
            if k[i][l] != len(oi) * single:
                raise NeronError("NOT_EQUIVARIANT", f"orbit {i} meets orbit {l} unevenly")
    return OrbitSummary(
        tuple(o[0] for o in orbits),
        tuple(len(o) for o in orbits),
        IntMatrix.from_rows(k, ncols=len(orbits)),
        orbits,
    )


def alpha_beta_k(f: SpecialFibre):
    """(alpha, beta) on the orbit basis Z^I.

    alpha(V) = sum_i <V, Gamma_i>_k / (r_i e_i) Gamma_i,  beta(Gamma_i) = r_i d_i e_i.
    """
    summary = k_level(f)
    kk = summary.k_intersections
    reps = summary.orbit_reps
    e = [f.e[a] for a in reps]
    d = [f.d[a] for a in reps]
    r = summary.r
    size = len(reps)
    alpha = IntMatrix.from_rows(
        [[_exact_div(kk[v, i], r[i] * e[i]) for v in range(size)] for i in range(size)],
        ncols=size,
    )
    beta = IntMatrix.from_rows([[r[i] * d[i] * e[i] for i in range(size)]], ncols=size)
    return alpha, beta


def lambda_map(f: SpecialFibre) -> IntMatrix:
    """Z^I -> Z^(geometric): orbit i goes to the sum of its components."""
    cols = []
    for orbit in f.orbits:
        col = [0] * f.n
        for a in orbit:
            col[a] = 1
        cols.append(col)
    return IntMatrix.from_columns(cols, f.n)


def gcd_invariants(f: SpecialFibre):
    """(d, d') = (gcd of d_i, gcd of r_i d_i) over the orbits."""
    d = reduce(gcd, (f.d[o[0]] for o in f.orbits), 0)
    dprime = reduce(gcd, (len(o) * f.d[o[0]] for o in f.orbits), 0)
    return d, dprime


# ---------------------------------------------------------------------------
# fixture generators


def make_cycle_fixture(n_components: int, involution: bool = False) -> SpecialFibre:
    """Cycle of n (-2)-curves, d = e = 1, genus 1.

    With ``involution`` sigma is the reflection a -> -a mod n, which fixes
    components 0 and n/2 (n must be even).
    """
    n = n_components
    if n < 2:
        raise NeronError("BAD_SHAPE", "a cycle needs at least two components")
    if involution and n % 2:
        raise NeronError("BAD_SHAPE", "reflection fixing two components needs an even cycle")
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        rows[a][a] = -2
        rows[a][(a + 1) % n] += 1
        rows[a][(a - 1) % n] += 1
    sigma = [(-a) % n for a in range(n)] if involution else None
    return SpecialFibre.from_data(rows, sigma, genus=1)


def make_hyperelliptic_fixture(g: int) -> SpecialFibre:
    """Two conjugate lines swapped by sigma, meeting transversally in g + 1 points."""
    if g < 1:
        raise NeronError("BAD_SHAPE", "genus must be at least 1")
    k = g + 1
    return SpecialFibre.from_data([[-k, k], [k, -k]], [1, 0], genus=g)


def tree_fibre(edges, d, sigma=None, genus=None) -> SpecialFibre:
    """Fibre whose components are (-2)-curves meeting along ``edges`` once each."""
    n = len(d)
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        rows[a][a] = -2
    for a, b in edges:
        rows[a][b] += 1
        rows[b][a] += 1
    return SpecialFibre.from_data(rows, sigma, d, genus=genus)


def _star(center_d, arms):
    d = [center_d]
    edges = []
    for arm in arms:
        prev = 0
        for mult in arm:
            d.append(mult)
            edges.append((prev, len(d) - 1))
            prev = len(d) - 1
    return edges, d


def make_kodaira_fixture(symbol: str) -> SpecialFibre:
    """Split Kodaira fibre (trivial sigma): I<n>, II, III, IV, I<n>*, II*, III*, IV*."""
    s = symbol.replace("_", "")
    if s == "I0":
        return SpecialFibre.from_data([[0]], genus=1)
    if s in ("I1", "II"):
        # one rational curve with a node or a cusp: self-intersection 0
        return SpecialFibre.from_data([[0]], genus=1)
    if s == "III":
        return SpecialFibre.from_data([[-2, 2], [2, -2]], genus=1)
    if s == "IV":
        return tree_fibre([(0, 1), (1, 2), (0, 2)], [1, 1, 1], genus=1)
    if s.startswith("I") and s.endswith("*") and s[1:-1].isdigit():
        k = int(s[1:-1])
        chain = list(range(4, 5 + k))
        d = [1, 1, 1, 1] + [2] * (k + 1)
        edges = [(chain[i], chain[i + 1]) for i in range(k)]
        edges += [(0, chain[0]), (1, chain[0]), (2, chain[-1]), (3, chain[-1])]
        return tree_fibre(edges, d, genus=1)
    if s.startswith("I") and s[1:].isdigit():
        return make_cycle_fixture(int(s[1:]))
    stars = {
        "IV*": (3, [[2, 1], [2, 1], [2, 1]]),
        "III*": (4, [[3, 2, 1], [3, 2, 1], [2]]),
        "II*": (6, [[5, 4, 3, 2, 1], [4, 2], [3]]),
    }
    if s in stars:
        edges, d = _star(*stars[s])
        return tree_fibre(edges, d, genus=1)
    raise NeronError("BAD_SHAPE", f"unknown Kodaira symbol {symbol!r}")
