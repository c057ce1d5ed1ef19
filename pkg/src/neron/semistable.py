"""Abelian varieties with semi-stable reduction, from uniformization data.

Input: the Galois action on the character lattice X of the torus part, the
action on the period lattice M, and an integer pairing P with
<m, x> = m^T P x. Equivariance means sigma_M^T P sigma_X = P.

Conventions: Hom(X, Z) is written as column covectors and G acts on it by
the inverse transpose of sigma_X; the injection M -> Hom(X, Z) is
m -> P^T m. With these, equivariance of the pairing is exactly the statement
that m -> P^T m commutes with the actions, and

    phi_A = Hom(X, Z) / P^T M.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cyccoh import (
    GroupMap,
    SigmaFiniteGroup,
    SigmaLattice,
    cyclic_generator,
    finite_invariants,
    h1,
    h1_presentation,
    invariants_lattice,
    multiplicative_order,
)
from .errors import NeronError, ValidationReport
from .zlattice import FinAbGroup, IntMatrix, Lattice, image_lattice, quotient_group, solve


@dataclass(frozen=True)
class UniformizationDatum:
    rank_t: int
    sigma_X: IntMatrix
    sigma_M: IntMatrix
    pairing: IntMatrix

    @classmethod
    def from_data(cls, rank, sigma_X, sigma_M, pairing):
        """Plain nested lists in; each action may also be a list of commuting generators."""
        return cls(
            rank,
            action_from_data(sigma_X, rank),
            action_from_data(sigma_M, rank),
            IntMatrix.from_rows(pairing, ncols=rank),
        )

    @cached_property
    def order_m(self) -> int:
        return multiplicative_order(self.sigma_X)

    @cached_property
    def dual_sigma(self) -> IntMatrix:
        """Action on Hom(X, Z): inverse transpose of sigma_X (sigma^-1 = sigma^(m-1))."""
        return (self.sigma_X ** (self.order_m - 1)).T

    @property
    def split(self) -> bool:
        one = IntMatrix.identity(self.rank_t)
        return self.sigma_X == one and self.sigma_M == one


def action_from_data(data, rank) -> IntMatrix:
    """A single action matrix, or the cyclic generator of a list of commuting ones."""
    if data and data[0] and isinstance(data[0][0], (list, tuple)):
        gens = [IntMatrix.from_rows(g, ncols=rank) for g in data]
        return cyclic_generator(gens, lambda a, b: a @ b, IntMatrix.identity(rank))
    return IntMatrix.from_rows(data, ncols=rank)


def validate_datum(u: UniformizationDatum) -> ValidationReport:
    rep = ValidationReport()
    t = u.rank_t
    for name, mat in (("sigma_X", u.sigma_X), ("sigma_M", u.sigma_M), ("pairing", u.pairing)):
        if mat.shape != (t, t):
            rep.issues.append(("BAD_SHAPE", f"{name} has shape {mat.shape}, expected {(t, t)}"))
    if rep.issues:
        return rep
    orders = {}
    for name, mat in (("sigma_X", u.sigma_X), ("sigma_M", u.sigma_M)):
        try:
            orders[name] = multiplicative_order(mat)
        except NeronError as err:
            rep.issues.append((err.code, f"{name}: {err.message}"))
    if len(orders) == 2 and orders["sigma_X"] != orders["sigma_M"]:
        rep.issues.append(
            ("ORDER_MISMATCH", f"sigma_X has order {orders['sigma_X']}, sigma_M has order {orders['sigma_M']}")
        )
    if u.sigma_M.T @ u.pairing @ u.sigma_X != u.pairing:
        rep.issues.append(("NOT_EQUIVARIANT", "sigma_M^T P sigma_X != P"))
    if u.pairing.det() == 0:
        rep.issues.append(("DEGENERATE", "pairing matrix is singular"))
    return rep


def require_valid(u: UniformizationDatum) -> UniformizationDatum:
    validate_datum(u).raise_for_errors()
    return u


def period_lattice(u: UniformizationDatum) -> Lattice:
    """i(M) = P^T Z^t inside Hom(X, Z)."""
    return image_lattice(u.pairing.T)


def phi_A_group(u: UniformizationDatum) -> SigmaFiniteGroup:
    require_valid(u)
    return SigmaFiniteGroup(Lattice.full(u.rank_t), period_lattice(u), u.dual_sigma)


def phi_A_rational(u: UniformizationDatum) -> FinAbGroup:
    return finite_invariants(phi_A_group(u))


def dual_invariants(u: UniformizationDatum) -> Lattice:
    """phi_E(k) = Hom(X, Z)^G."""
    return invariants_lattice(SigmaLattice.full(u.dual_sigma, u.order_m))


def period_invariants(u: UniformizationDatum) -> Lattice:
    """phi_M(k) = M^G."""
    return invariants_lattice(SigmaLattice.full(u.sigma_M, u.order_m))


def sigma_subgroup(u: UniformizationDatum) -> FinAbGroup:
    """Sigma = Hom(X, Z)^G / i(M^G), checked to embed in phi_A(k)."""
    require_valid(u)
    e_g = dual_invariants(u)
    i_mg = period_invariants(u).image_under(u.pairing.T)
    # Sigma -> phi_A(k) is injective iff Hom(X, Z)^G meets i(M) exactly in i(M^G)
    if e_g & period_lattice(u) != i_mg:
        raise NeronError("EMBED_FAIL", "Hom(X,Z)^G meets i(M) in more than i(M^G)")
    if not phi_A_group(u).invariants_lattice().contains_lattice(e_g):
        raise NeronError("EMBED_FAIL", "Hom(X,Z)^G is not fixed in phi_A")
    return quotient_group(e_g, i_mg)


def h1_of_M(u: UniformizationDatum) -> FinAbGroup:
    require_valid(u)
    return h1(SigmaLattice.full(u.sigma_M, u.order_m))


def obstruction_map(u: UniformizationDatum) -> GroupMap:
    """phi_A(k) / Sigma -> H^1(G, M): lift x to y in Hom(X, Z), send it to [i^-1(D y)]."""
    require_valid(u)
    q = phi_A_group(u)
    fixed = q.invariants_lattice()
    t = u.rank_t
    d = u.dual_sigma - IntMatrix.identity(t)
    cycles, boundaries = h1_presentation(SigmaLattice.full(u.sigma_M, u.order_m))
    images = []
    for y in fixed.columns():
        m = solve(u.pairing.T, d.apply(y))
        if m is None:
            raise NeronError("EMBED_FAIL", f"D y is not in i(M) for y = {y}")
        images.append(m)
    return GroupMap(
        fixed,
        dual_invariants(u) + period_lattice(u),
        cycles,
        boundaries,
        IntMatrix.from_columns(images, t),
    )


@dataclass(frozen=True)
class SemistableReport:
    phi_A: FinAbGroup
    phi_A_rational: FinAbGroup
    sigma_subgroup: FinAbGroup
    h1_M: FinAbGroup
    split: bool
    bounds_ok: bool
    order_m: int = 1
    det_pairing: int = 0
    phi_E_rational_rank: int = 0
    phi_M_rational_rank: int = 0
    obstruction_image: FinAbGroup = FinAbGroup()

    def to_dict(self) -> dict:
        return {
            "phi_A": self.phi_A.to_dict(),
            "phi_A_rational": self.phi_A_rational.to_dict(),
            "sigma_subgroup": self.sigma_subgroup.to_dict(),
            "h1_M": self.h1_M.to_dict(),
            "split": self.split,
            "bounds_ok": self.bounds_ok,
            "order_m": self.order_m,
            "det_pairing": self.det_pairing,
            "phi_E_rational_rank": self.phi_E_rational_rank,
            "phi_M_rational_rank": self.phi_M_rational_rank,
            "obstruction_image": self.obstruction_image.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict):
        groups = ("phi_A", "phi_A_rational", "sigma_subgroup", "h1_M", "obstruction_image")
        kw = {k: (FinAbGroup.from_dict(v) if k in groups else v) for k, v in data.items()}
        return cls(**kw)


def semistable_report(u: UniformizationDatum, raise_on_inconsistent: bool = True) -> SemistableReport:
    require_valid(u)
    phi = phi_A_group(u).group
    rational = phi_A_rational(u)
    sig = sigma_subgroup(u)
    h = h1_of_M(u)
    obs = obstruction_map(u)
    obs_image = obs.image()

    quotient = rational.order // sig.order
    bounds_ok = rational.order % sig.order == 0 and h.order % quotient == 0
    # the induced map phi_A(k)/Sigma -> H^1 is injective with image of order |phi_A(k)/Sigma|
    bounds_ok = bounds_ok and obs.is_injective() and obs_image.order == quotient
    if u.split:
        bounds_ok = bounds_ok and sig == rational == phi and h.is_trivial
    report = SemistableReport(
        phi,
        rational,
        sig,
        h,
        u.split,
        bounds_ok,
        u.order_m,
        u.pairing.det(),
        dual_invariants(u).rank,
        period_invariants(u).rank,
        obs_image,
    )
    if raise_on_inconsistent and not bounds_ok:
        raise NeronError("INCONSISTENT", "Sigma / phi_A(k) / H^1(G, M) bounds violated")
    return report
