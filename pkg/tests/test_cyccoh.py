import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from neron.cyccoh import (
    GroupMap,
    SigmaFiniteGroup,
    SigmaLattice,
    connecting_maps,
    cyclic_generator,
    finite_invariants,
    h1,
    h2,
    invariants_lattice,
    multiplicative_order,
    norm_of,
    permutation_matrix,
)
from neron.errors import NeronError
from neron.fibre import alpha_bar, beta_bar, make_cycle_fixture, make_hyperelliptic_fixture
from neron.jacobian import phi_geometric
from neron.zlattice import FinAbGroup, IntMatrix, Lattice, image_lattice, kernel_lattice

from randdata import random_finite_order

M = IntMatrix.from_rows
SWAP = M([[0, 1], [1, 0]])
NEG = M([[-1]])


def test_multiplicative_order():
    assert multiplicative_order(IntMatrix.identity(3)) == 1
    assert multiplicative_order(SWAP) == 2
    assert multiplicative_order(M([[0, -1], [1, 1]])) == 6


@pytest.mark.parametrize("rows", [[[2]], [[1, 1], [0, 1]]])
def test_infinite_order_rejected(rows):
    with pytest.raises(NeronError) as err:
        multiplicative_order(M(rows))
    assert err.value.code == "NOT_FINITE_ORDER"


def test_order_must_be_multiple():
    with pytest.raises(NeronError) as err:
        SigmaLattice.full(SWAP, 3)
    assert err.value.code == "BAD_ORDER"


def test_not_stable():
    l = SigmaLattice(2, Lattice.spanned_by(2, [(1, 0)]), SWAP)
    assert not l.is_stable()
    with pytest.raises(NeronError) as err:
        l.require_stable()
    assert err.value.code == "NOT_STABLE"


def test_cyclic_generator():
    mul = lambda a, b: a @ b
    one = IntMatrix.identity(2)
    rot = M([[0, -1], [1, 0]])
    g = cyclic_generator([rot ** 2, rot], mul, one)
    assert multiplicative_order(g) == 4
    klein = [M([[-1, 0], [0, 1]]), M([[1, 0], [0, -1]])]
    with pytest.raises(NeronError) as err:
        cyclic_generator(klein, mul, one)
    assert err.value.code == "NOT_CYCLIC"


# -- norm, H^1, H^2


def test_norm_examples():
    assert norm_of(SigmaLattice.trivial(2, 3)) == 3 * IntMatrix.identity(2)
    assert norm_of(SigmaLattice.full(SWAP)) == M([[1, 1], [1, 1]])
    assert norm_of(SigmaLattice.full(NEG)).is_zero()


def test_h1_examples():
    assert h1(SigmaLattice.full(permutation_matrix([2, 0, 1, 4, 3]))).is_trivial
    assert h1(SigmaLattice.full(NEG)) == FinAbGroup.cyclic(2)
    assert h1(SigmaLattice.trivial(1, 5)).is_trivial


def test_h2_examples():
    for m in range(1, 7):
        assert h2(SigmaLattice.trivial(1, m)) == FinAbGroup.from_orders([m])
    assert h2(SigmaLattice.full(SWAP)).is_trivial
    assert h2(SigmaLattice.full(NEG)).is_trivial


def test_doubling_the_order():
    # a trivial module viewed through a group of order 2m has H^2 = Z/2m
    assert h2(SigmaLattice.trivial(1, 3).with_order(6)) == FinAbGroup.cyclic(6)
    # for -1, doubling the order keeps H^1 = Z/2 (same norm map, same D image)
    assert h1(SigmaLattice.full(NEG, 4)) == FinAbGroup.cyclic(2)


def test_invariants_examples():
    assert invariants_lattice(SigmaLattice.full(SWAP)) == Lattice.spanned_by(2, [(1, 1)])
    cyc4 = make_cycle_fixture(4, involution=True)
    inv = invariants_lattice(SigmaLattice.full(cyc4.sigma_matrix))
    assert inv == Lattice.spanned_by(4, [(1, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 0)])
    assert invariants_lattice(SigmaLattice.full(NEG)) == Lattice.zero(1)


@given(st.integers(1, 8), st.randoms(use_true_random=False))
def test_permutation_modules_have_trivial_h1(n, rnd):
    perm = list(range(n))
    rnd.shuffle(perm)
    m = SigmaLattice.full(permutation_matrix(perm))
    assert h1(m).is_trivial
    orbits = len({frozenset(_orbit(perm, a)) for a in range(n)})
    assert invariants_lattice(m).rank == orbits


def _orbit(perm, a):
    seen, x = [a], perm[a]
    while x != a:
        seen.append(x)
        x = perm[x]
    return seen


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_cohomology_is_killed_by_order(seed, rank):
    sigma = random_finite_order(random.Random(seed), rank)
    m = SigmaLattice.full(sigma)
    for g in (h1(m), h2(m)):
        assert g.is_finite
        assert m.order_m % g.exponent == 0


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_h1_and_h2_invariant_under_conjugation(seed, rank):
    rng = random.Random(seed)
    sigma = random_finite_order(rng, rank)
    from randdata import random_unimodular

    u, uinv = random_unimodular(rng, rank)
    a, b = SigmaLattice.full(sigma), SigmaLattice.full(uinv @ sigma @ u)
    assert h1(a) == h1(b) and h2(a) == h2(b)


# -- finite quotients


def test_finite_invariants_examples():
    cyc4 = make_cycle_fixture(4, involution=True)
    assert finite_invariants(phi_geometric(cyc4).presentation) == FinAbGroup.cyclic(2)
    hyp2 = make_hyperelliptic_fixture(2)
    assert finite_invariants(phi_geometric(hyp2).presentation).is_trivial
    trivial = SigmaFiniteGroup(Lattice.full(2), image_lattice(M([[2, 0], [0, 6]])), IntMatrix.identity(2))
    assert finite_invariants(trivial) == FinAbGroup.from_orders([2, 6])


def test_sigma_finite_group_requires_stability():
    with pytest.raises(NeronError):
        SigmaFiniteGroup(Lattice.full(2), Lattice.spanned_by(2, [(2, 0)]), SWAP)


def test_group_map_basic():
    # Z/4 -> Z/2 reduction
    f = GroupMap(Lattice.full(1), Lattice.spanned_by(1, [(4,)]), Lattice.full(1),
                 Lattice.spanned_by(1, [(2,)]), M([[1]]))
    assert f.is_surjective() and not f.is_injective()
    assert f.image() == FinAbGroup.cyclic(2)


# -- connecting maps


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_connecting_maps_hyperelliptic(g):
    f = make_hyperelliptic_fixture(g)
    sigma = f.sigma_matrix
    full = SigmaLattice.full(sigma)
    kb = SigmaLattice(f.n, kernel_lattice(beta_bar(f)), sigma)
    c0 = connecting_maps(kb, full, beta_bar(f))
    assert c0.delta0.image().order == 2
    assert c0.delta0.is_surjective()
    ka = SigmaLattice(f.n, kernel_lattice(alpha_bar(f)), sigma)
    c1 = connecting_maps(ka, full, alpha_bar(f))
    assert c1.delta1.is_injective()
    assert c1.delta1.image().order == 2


def test_connecting_maps_split_trivial():
    one = IntMatrix.identity(2)
    sub = SigmaLattice(2, Lattice.spanned_by(2, [(1, 0)]), one, 2)
    mid = SigmaLattice(2, Lattice.full(2), one, 2)
    c = connecting_maps(sub, mid, M([[0, 1]]))
    assert c.delta0.image().is_trivial
    assert c.delta1.image().is_trivial


def test_connecting_maps_requires_exactness():
    one = IntMatrix.identity(2)
    sub = SigmaLattice(2, Lattice.spanned_by(2, [(0, 1)]), one)
    mid = SigmaLattice(2, Lattice.full(2), one)
    with pytest.raises(NeronError) as err:
        connecting_maps(sub, mid, M([[0, 1]]))
    assert err.value.code == "NOT_EXACT"
