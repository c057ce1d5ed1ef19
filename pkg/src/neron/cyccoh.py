"""Lattices with an action of a finite cyclic group G = <sigma>.

Tate cohomology is computed with the norm N = 1 + sigma + ... + sigma^(m-1)
and the difference D = sigma - 1:

    H^1(G, M) = ker(N on M) / D M
    H^2(G, M) = M^G / N M

and the connecting maps of a short exact sequence 0 -> M' -> M -> M'' -> 0
are  delta_0([x]) = [D y],  delta_1([x]) = [N y]  for any lift y of x.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Hashable, Optional, Sequence

from .errors import NeronError
from .zlattice import (
    FinAbGroup,
    IntMatrix,
    Lattice,
    coords_in_lattice,
    preimage_lattice,
    quotient_group,
    solve,
)

ORDER_LIMIT = 10_000


def multiplicative_order(sigma: IntMatrix, limit: int = ORDER_LIMIT) -> int:
    """Least m >= 1 with sigma^m = 1; NOT_FINITE_ORDER if there is none."""
    if not sigma.is_square():
        raise NeronError("DIMENSION_MISMATCH", f"action matrix of shape {sigma.shape}")
    if abs(sigma.det()) != 1:
        raise NeronError("NOT_FINITE_ORDER", "action matrix is not unimodular")
    one = IntMatrix.identity(sigma.rows)
    power = sigma
    for m in range(1, limit + 1):
        if power == one:
            return m
        power = power @ sigma
    raise NeronError("NOT_FINITE_ORDER", f"no sigma^m = 1 with m <= {limit}")


def cyclic_generator(
    generators: Sequence[Hashable],
    mul: Callable,
    identity: Hashable,
    limit: int = 100_000,
):
    """Return a single generator of the group generated by ``generators``.

    Raises NOT_CYCLIC when the generated group is not cyclic (or is larger
    than ``limit`` elements, which cannot be decided cheaply).
    """
    gens = [g for g in generators if g != identity]
    if not gens:
        return identity
    if len(gens) == 1:
        return gens[0]
    for a in gens:
        for b in gens:
            if mul(a, b) != mul(b, a):
                raise NeronError("NOT_CYCLIC", "generators do not commute")
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > limit:
                        raise NeronError("NOT_CYCLIC", f"generated group exceeds {limit} elements")
        frontier = nxt
    size = len(elements)
    for x in elements:
        if _element_order(x, mul, identity, size) == size:
            return x
    raise NeronError("NOT_CYCLIC", f"abelian group of order {size} has no element of that order")


def _element_order(x, mul, identity, bound):
    y = x
    for k in range(1, bound + 1):
        if y == identity:
            return k
        y = mul(y, x)
    return None


@dataclass(frozen=True)
class SigmaLattice:
    """A lattice inside Z^ambient_rank together with sigma acting on Z^ambient_rank.

    ``order_m`` is the order of the cyclic group used for N; it defaults to
    the multiplicative order of sigma and may be any multiple of it.
    """

    ambient_rank: int
    basis: Lattice
    sigma: IntMatrix
    order_m: Optional[int] = None

    def __post_init__(self):
        if self.sigma.shape != (self.ambient_rank, self.ambient_rank):
            raise NeronError("DIMENSION_MISMATCH", f"sigma of shape {self.sigma.shape}")
        if self.basis.ambient_rank != self.ambient_rank:
            raise NeronError("DIMENSION_MISMATCH", "lattice and sigma live in different spaces")
        if self.order_m is None:
            object.__setattr__(self, "order_m", multiplicative_order(self.sigma))
        elif self.order_m < 1 or self.sigma ** self.order_m != IntMatrix.identity(self.ambient_rank):
            raise NeronError("BAD_ORDER", f"sigma^{self.order_m} is not the identity")

    @classmethod
    def full(cls, sigma: IntMatrix, order_m: Optional[int] = None):
        return cls(sigma.rows, Lattice.full(sigma.rows), sigma, order_m)

    @classmethod
    def trivial(cls, rank: int, order_m: int = 1):
        return cls.full(IntMatrix.identity(rank), order_m)

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def difference(self) -> IntMatrix:
        return self.sigma - IntMatrix.identity(self.ambient_rank)

    def is_stable(self) -> bool:
        return self.basis.is_stable_under(self.sigma)

    def require_stable(self):
        if not self.is_stable():
            raise NeronError("NOT_STABLE", "sigma does not preserve the lattice")

    def with_order(self, order_m: int) -> "SigmaLattice":
        return SigmaLattice(self.ambient_rank, self.basis, self.sigma, order_m)


def norm_of(m: SigmaLattice) -> IntMatrix:
    n = IntMatrix.zeros(m.ambient_rank, m.ambient_rank)
    power = IntMatrix.identity(m.ambient_rank)
    for _ in range(m.order_m):
        n = n + power
        power = power @ m.sigma
    return n


def _kernel_within(lattice: Lattice, f: IntMatrix) -> Lattice:
    return preimage_lattice(lattice, f, Lattice.zero(f.rows))


def h1_presentation(m: SigmaLattice):
    """(cycles, boundaries) = (ker N restricted to the lattice, D applied to the lattice)."""
    m.require_stable()
    cycles = _kernel_within(m.basis, norm_of(m))
    boundaries = m.basis.image_under(m.difference)
    return cycles, boundaries


def h2_presentation(m: SigmaLattice):
    m.require_stable()
    return invariants_lattice(m), m.basis.image_under(norm_of(m))


def h1(m: SigmaLattice) -> FinAbGroup:
    return quotient_group(*h1_presentation(m))


def h2(m: SigmaLattice) -> FinAbGroup:
    return quotient_group(*h2_presentation(m))


def invariants_lattice(m: SigmaLattice) -> Lattice:
    return _kernel_within(m.basis, m.difference)


@dataclass(frozen=True)
class SigmaFiniteGroup:
    """The group l/m with the automorphism induced by sigma."""

    l: Lattice
    m: Lattice
    sigma: IntMatrix

    def __post_init__(self):
        if not self.l.contains_lattice(self.m):
            raise NeronError("NOT_SUBLATTICE", "relations are not contained in the generators")
        if not (self.l.is_stable_under(self.sigma) and self.m.is_stable_under(self.sigma)):
            raise NeronError("NOT_STABLE", "sigma does not preserve the presentation")

    @property
    def group(self) -> FinAbGroup:
        return quotient_group(self.l, self.m)

    def invariants_lattice(self) -> Lattice:
        """Preimage in l of the fixed subgroup."""
        d = self.sigma - IntMatrix.identity(self.sigma.rows)
        return preimage_lattice(self.l, d, self.m)


def finite_invariants(q: SigmaFiniteGroup) -> FinAbGroup:
    return quotient_group(q.invariants_lattice(), q.m)


# ---------------------------------------------------------------------------
# connecting maps


@dataclass(frozen=True)
class GroupMap:
    """A homomorphism source/source_relations -> target/target_relations.

    Column j of ``images`` is a representative in the target's ambient space
    of the image of basis column j of ``source``.
    """

    source: Lattice
    source_relations: Lattice
    target: Lattice
    target_relations: Lattice
    images: IntMatrix

    def domain(self) -> FinAbGroup:
        return quotient_group(self.source, self.source_relations)

    def codomain(self) -> FinAbGroup:
        return quotient_group(self.target, self.target_relations)

    def image_lattice(self) -> Lattice:
        return Lattice(self.images.rows, self.images) + self.target_relations

    def image(self) -> FinAbGroup:
        return quotient_group(self.image_lattice(), self.target_relations)

    def kernel(self) -> Lattice:
        """Sublattice of ``source`` sent into the target relations."""
        coords = preimage_lattice(Lattice.full(self.source.rank), self.images, self.target_relations)
        return coords.image_under(self.source.basis) if self.source.rank else coords

    def __call__(self, x: Sequence[int]):
        c = coords_in_lattice(self.source, x)
        if c is None:
            raise NeronError("NOT_MEMBER", f"{tuple(x)} is not in the source lattice")
        return self.images.apply(c)

    def is_injective(self) -> bool:
        return self.kernel() + self.source_relations == self.source_relations

    def is_surjective(self) -> bool:
        return self.image_lattice() == self.target + self.target_relations


@dataclass(frozen=True)
class ConnectingMaps:
    quotient: SigmaLattice  # in coordinates of ``quotient_basis``
    quotient_basis: Lattice  # image of the middle lattice in the target space
    lifts: IntMatrix  # column i lifts basis column i of quotient_basis
    delta0: GroupMap  # H^0-side: quotient^G -> H^1(sub)
    delta1: GroupMap  # H^1(quotient) -> H^2(sub)


def connecting_maps(sub: SigmaLattice, mid: SigmaLattice, quot_map: IntMatrix) -> ConnectingMaps:
    """delta_0 and delta_1 for 0 -> sub -> mid -> quot_map(mid) -> 0.

    ``sub`` must be exactly the kernel of ``quot_map`` on ``mid``. The
    action on the quotient is the one induced through ``quot_map``; it is
    returned in coordinates of a basis of the image lattice.
    """
    if sub.ambient_rank != mid.ambient_rank or sub.sigma != mid.sigma:
        raise NeronError("NOT_EXACT", "sub and mid must share ambient space and action")
    if quot_map.cols != mid.ambient_rank:
        raise NeronError("DIMENSION_MISMATCH", f"quotient map of shape {quot_map.shape}")
    mid.require_stable()
    sub.require_stable()
    if _kernel_within(mid.basis, quot_map) != sub.basis:
        raise NeronError("NOT_EXACT", "sub is not the kernel of the quotient map on mid")
    m = mid.order_m
    if sub.order_m != m:
        sub = sub.with_order(m)

    fb = quot_map @ mid.basis.basis
    qlat = Lattice(quot_map.rows, fb)
    lifts = []
    for q in qlat.columns():
        y = solve(fb, q)
        lifts.append(mid.basis.basis.apply(y))
    lift = IntMatrix.from_columns(lifts, mid.ambient_rank)
    sigma_cols = [coords_in_lattice(qlat, quot_map.apply(mid.sigma.apply(y))) for y in lifts]
    sigma_q = IntMatrix.from_columns(sigma_cols, qlat.rank)
    quotient = SigmaLattice(qlat.rank, Lattice.full(qlat.rank), sigma_q, m)

    d, n = mid.difference, norm_of(mid)

    inv_q = invariants_lattice(quotient)
    cyc_sub, bnd_sub = h1_presentation(sub)
    delta0 = GroupMap(
        inv_q,
        Lattice.zero(qlat.rank),
        cyc_sub,
        bnd_sub,
        d @ lift @ inv_q.basis,
    )

    cyc_q, bnd_q = h1_presentation(quotient)
    fix_sub, norm_sub = h2_presentation(sub)
    delta1 = GroupMap(cyc_q, bnd_q, fix_sub, norm_sub, n @ lift @ cyc_q.basis)
    return ConnectingMaps(quotient, qlat, lift, delta0, delta1)


def permutation_matrix(perm: Sequence[int]) -> IntMatrix:
    """Matrix sending basis vector a to basis vector perm[a]."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for a, b in enumerate(perm):
        rows[b][a] = 1
    return IntMatrix.from_rows(rows, ncols=n)
