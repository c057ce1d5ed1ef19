"""Tori with multiplicative reduction.

The component group of such a torus is Hom(X, Z) for its character lattice
X, and the rational points are the Galois-invariant covectors. These agree
with Hom(X_G, Z), where X_G is the largest torsion-free quotient of X on
which G acts trivially; ``lemma31_check`` compares the two constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cyccoh import multiplicative_order
from .errors import NeronError
from .zlattice import IntMatrix, Lattice, hnf, image_lattice, kernel_lattice, snf


@dataclass(frozen=True)
class CharacterLattice:
    rank: int
    sigma: IntMatrix

    def __post_init__(self):
        if self.sigma.shape != (self.rank, self.rank):
            raise NeronError("DIMENSION_MISMATCH", f"sigma of shape {self.sigma.shape} on rank {self.rank}")

    @cached_property
    def order_m(self) -> int:
        return multiplicative_order(self.sigma)

    @classmethod
    def split(cls, rank: int):
        return cls(rank, IntMatrix.identity(rank))


def coinvariants_free(x: CharacterLattice):
    """(rank of X_G, projection matrix X -> X_G).

    W = (1 - sigma) X; the rows of the Smith left transform beyond rank(W)
    cut out X / saturation(W), which is X_G.
    """
    x.order_m  # NOT_FINITE_ORDER check
    w = IntMatrix.identity(x.rank) - x.sigma
    dec = snf(w)
    r = dec.rank
    proj = IntMatrix.from_rows([dec.u.row(i) for i in range(r, x.rank)], ncols=x.rank)
    # canonical representative: row HNF (same kernel, still onto Z^(rank - r))
    return x.rank - r, hnf(proj.T).T


def invariant_dual(x: CharacterLattice) -> Lattice:
    """Hom(X, Z)^G as covectors fixed by the transpose action."""
    return kernel_lattice(x.sigma.T - IntMatrix.identity(x.rank))


def split_part_dual(x: CharacterLattice) -> Lattice:
    """Hom(X_G, Z) pulled back to Hom(X, Z) along the projection."""
    _, proj = coinvariants_free(x)
    return image_lattice(proj.T)


def lemma31_check(x: CharacterLattice) -> bool:
    return split_part_dual(x) == invariant_dual(x)


@dataclass(frozen=True)
class TorusSummary:
    rank: int
    order_m: int
    coinvariant_rank: int
    phi_rational_rank: int
    phi_rational_basis: tuple
    projection: tuple
    duals_agree: bool
    split: bool

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "order_m": self.order_m,
            "coinvariant_rank": self.coinvariant_rank,
            "phi_rational_rank": self.phi_rational_rank,
            "phi_rational_basis": [list(c) for c in self.phi_rational_basis],
            "projection": [list(r) for r in self.projection],
            "duals_agree": self.duals_agree,
            "split": self.split,
        }

    @classmethod
    def from_dict(cls, data: dict):
        return cls(
            data["rank"],
            data["order_m"],
            data["coinvariant_rank"],
            data["phi_rational_rank"],
            tuple(tuple(c) for c in data["phi_rational_basis"]),
            tuple(tuple(r) for r in data["projection"]),
            data["duals_agree"],
            data["split"],
        )


def torus_summary(x: CharacterLattice) -> TorusSummary:
    rank_g, proj = coinvariants_free(x)
    inv = invariant_dual(x)
    return TorusSummary(
        x.rank,
        x.order_m,
        rank_g,
        inv.rank,
        tuple(inv.columns()),
        tuple(tuple(r) for r in proj.to_rows()),
        lemma31_check(x),
        x.sigma == IntMatrix.identity(x.rank),
    )
