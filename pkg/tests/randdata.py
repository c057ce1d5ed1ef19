"""Seeded random generators for valid fibres, finite-order actions and
equivariant uniformization data. Shared by the property and acceptance tests."""

import random
from math import lcm

from neron.errors import NeronError
from neron.fibre import SpecialFibre, validate
from neron.semistable import UniformizationDatum, validate_datum
from neron.zlattice import IntMatrix


# ---------------------------------------------------------------------------
# fibres


def _fibre_from_adjacency(adj, d, sigma, e=None):
    """Fill in self-intersections so that every weighted row sum vanishes."""
    n = len(d)
    e = e or [1] * n
    rows = [list(r) for r in adj]
    for a in range(n):
        s = sum(d[b] * adj[a][b] for b in range(n) if b != a)
        if s % d[a]:
            return None
        rows[a][a] = -s // d[a]
    f = SpecialFibre.from_data(rows, sigma, d, e)
    if not validate(f).ok:
        return None
    g = adjunction_genus(f)
    if g is not None:
        f = SpecialFibre.from_data(rows, sigma, d, e, genus=g)
        if not validate(f).ok:
            return None
    return f


def adjunction_genus(f):
    """Genus implied by adjunction if every component is a smooth rational curve.

    Used only to feed consistent genera to the genus-dependent checks.
    """
    if any(x != 1 for x in f.e):
        return None
    m = f.intersection_matrix
    twice = sum(f.d[a] * (-m[a, a] - 2) for a in range(f.n))
    if twice % 2 or twice < -2:
        return None
    return twice // 2 + 1


def _symmetrize_under(sigma, n, weights):
    """Make an edge-weight dict sigma-invariant by copying each orbit of edges."""
    adj = [[0] * n for _ in range(n)]
    for (a, b), w in weights.items():
        x, y = a, b
        while True:
            adj[x][y] = adj[y][x] = w
            x, y = sigma[x], sigma[y]
            if (x, y) in ((a, b), (b, a)):
                break
    return adj


def random_cycle(rng, n):
    kind = rng.choice(["trivial", "reflection", "rotation"])
    if kind == "trivial":
        sigma = list(range(n))
    elif kind == "reflection":
        sigma = [(-a) % n for a in range(n)]
    else:
        k = rng.choice([k for k in range(1, n)] or [0])
        sigma = [(a + k) % n for a in range(n)]
    w = rng.choice([1, 1, 1, 2])
    weights = {(a, (a + 1) % n): w for a in range(n)}
    if n == 2:
        weights = {(0, 1): 2 * w}
    adj = _symmetrize_under(sigma, n, {})
    for (a, b), x in weights.items():
        adj[a][b] = adj[b][a] = x
    c = rng.choice([1, 1, 2, 3])
    return _fibre_from_adjacency(adj, [c] * n, sigma)


def random_chain(rng, n):
    sigma = [n - 1 - a for a in range(n)] if rng.random() < 0.6 else list(range(n))
    half = [rng.choice([1, 1, 2, 2, 3]) for _ in range((n + 1) // 2)]
    d = [half[min(a, n - 1 - a)] for a in range(n)]
    adj = [[0] * n for _ in range(n)]
    for a in range(n - 1):
        w = rng.choice([1, 1, 2])
        adj[a][a + 1] = adj[a + 1][a] = w
    for a in range(n - 1):  # mirror the weights
        b = n - 2 - a
        if b < a:
            adj[a][a + 1] = adj[a + 1][a] = adj[b][b + 1]
    return _fibre_from_adjacency(adj, d, sigma)


def random_star(rng, max_n):
    arms = rng.randint(2, 4)
    length = rng.randint(1, max(1, (max_n - 1) // arms))
    n = 1 + arms * length
    # component 1 + arm*length + pos
    mode = rng.choice(["trivial", "rotate", "reflect"])
    perm_arms = list(range(arms))
    if mode == "rotate":
        perm_arms = [(i + 1) % arms for i in range(arms)]
    elif mode == "reflect":
        perm_arms = [1, 0] + list(range(2, arms))
    sigma = [0] + [1 + perm_arms[i] * length + p for i in range(arms) for p in range(length)]
    arm_d = [rng.choice([1, 1, 2]) for _ in range(length)]
    center_d = rng.choice([1, 2, 2, 3])
    d = [center_d] + [arm_d[p] for _ in range(arms) for p in range(length)]
    adj = [[0] * n for _ in range(n)]
    w = rng.choice([1, 1, 2])
    for i in range(arms):
        first = 1 + i * length
        adj[0][first] = adj[first][0] = w
        for p in range(length - 1):
            adj[first + p][first + p + 1] = adj[first + p + 1][first + p] = 1
    return _fibre_from_adjacency(adj, d, sigma)


def random_weighted(rng, max_n):
    """Two swapped blocks; optionally doubled edges so an orbit can carry e = 2."""
    k = rng.randint(1, max(1, max_n // 2))
    n = 2 * k
    sigma = [(a + k) % n for a in range(n)]
    adj = [[0] * n for _ in range(n)]
    for a in range(k - 1):
        adj[a][a + 1] = adj[a + 1][a] = 1
        adj[a + k][a + k + 1] = adj[a + k + 1][a + k] = 1
    bridge = rng.randint(1, 3)
    adj[k - 1][2 * k - 1] = adj[2 * k - 1][k - 1] = bridge
    adj[0][k] = adj[k][0] = bridge if k > 1 else 0
    d = [1] * n
    e = None
    if rng.random() < 0.3:
        # doubling every intersection keeps e = 2 admissible everywhere
        adj = [[2 * x for x in row] for row in adj]
        e = [2] * n
    return _fibre_from_adjacency(adj, d, sigma, e)


def random_fibre(rng, max_components=12):
    while True:
        shape = rng.choice(["cycle", "chain", "star", "weighted"])
        n = rng.randint(2, max_components)
        if shape == "cycle":
            f = random_cycle(rng, n)
        elif shape == "chain":
            f = random_chain(rng, n)
        elif shape == "star":
            f = random_star(rng, max_components)
        else:
            f = random_weighted(rng, max_components)
        if f is not None and f.n <= max_components:
            return f


def fibre_corpus(seed=0, count=200):
    rng = random.Random(seed)
    return [random_fibre(rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# finite-order unimodular actions

BLOCKS = [
    ([[1]], 1),
    ([[-1]], 2),
    ([[0, 1], [1, 0]], 2),
    ([[1, 1], [0, -1]], 2),
    ([[0, -1], [1, -1]], 3),
    ([[0, -1], [1, 0]], 4),
    ([[0, -1], [1, 1]], 6),
    ([[0, 0, 1], [1, 0, 0], [0, 1, 0]], 3),
    ([[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], 4),
]


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return IntMatrix.from_rows(out, ncols=n)


def random_unimodular(rng, n, steps=6, coeff=2):
    """(U, U^-1) as products of elementary matrices."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        s = rng.choice([1, -1])
        return IntMatrix.from_rows([[s]]), IntMatrix.from_rows([[s]])
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-coeff, coeff)
        # U <- U E_ij(c): column j += c column i ; U^-1 <- E_ij(-c) U^-1: row i -= c row j
        for r in range(n):
            u[r][j] += c * u[r][i]
        v[i] = [v[i][k] - c * v[j][k] for k in range(n)]
    return IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def random_finite_order(rng, rank, max_order=6):
    """Unimodular matrix of order <= max_order, conjugated away from block form."""
    while True:
        blocks, size, order = [], 0, 1
        while size < rank:
            b, o = rng.choice(BLOCKS)
            if size + len(b) > rank:
                continue
            blocks.append(b)
            size += len(b)
            order = lcm(order, o)
        if order <= max_order:
            break
    s = block_diag(blocks)
    u, uinv = random_unimodular(rng, rank)
    return u @ s @ uinv


def random_permutation(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return p


# ---------------------------------------------------------------------------
# uniformization data


def random_datum(rng, max_rank=4):
    """Equivariant (sigma_X, sigma_M, P) with det P != 0.

    Start from sigma_M = sigma_X^-T and P commuting with sigma_X, then change
    bases of X and M independently.
    """
    while True:
        t = rng.randint(1, max_rank)
        sx = random_finite_order(rng, t)
        m = _order(sx)
        inv = sx ** (m - 1)
        a = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(t)] for _ in range(t)])
        p = IntMatrix.zeros(t, t)
        for j in range(m):
            p = p + (sx ** j) @ a @ (inv ** j)
        if rng.random() < 0.5:
            p = p + rng.randint(-2, 2) * IntMatrix.identity(t)
        if p.det() == 0:
            continue
        sm = inv.T
        w, winv = random_unimodular(rng, t, steps=3, coeff=1)
        v, vinv = random_unimodular(rng, t, steps=3, coeff=1)
        sx2 = winv @ sx @ w
        sm2 = vinv @ sm @ v
        p2 = v.T @ p @ w
        u = UniformizationDatum(t, sx2, sm2, p2)
        if validate_datum(u).ok:
            return u


def split_datum(rng, max_rank=4):
    while True:
        t = rng.randint(1, max_rank)
        p = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(t)] for _ in range(t)])
        if p.det():
            one = IntMatrix.identity(t)
            return UniformizationDatum(t, one, one, p)


def _order(s):
    one = IntMatrix.identity(s.rows)
    p, k = s, 1
    while p != one:
        p, k = p @ s, k + 1
    return k
