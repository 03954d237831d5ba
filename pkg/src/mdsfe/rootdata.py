"""Cartan matrices, symmetrized pairings, and Weyl group enumeration for
the small classical types used as fixtures and oracles."""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .errors import UnsupportedType


def cartan_matrix(cartan_type: str, rank: int):
    """A[i][j] = <alpha_j, alpha_i^vee>; conventions: B has the short root last,
    C the long root last, G2 with alpha_1 long."""
    t = cartan_type.upper()
    A = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i, j, aij=-1, aji=-1):
        A[i][j] = aij
        A[j][i] = aji

    if t == "A":
        for i in range(rank - 1):
            link(i, i + 1)
    elif t == "B":
        if rank < 2:
            raise UnsupportedType("B needs rank >= 2")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 2, rank - 1, -1, -2)
    elif t == "C":
        if rank < 2:
            raise UnsupportedType("C needs rank >= 2")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 2, rank - 1, -2, -1)
    elif t == "D":
        if rank < 3:
            raise UnsupportedType("D needs rank >= 3")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif t == "G":
        if rank != 2:
            raise UnsupportedType("G needs rank 2")
        link(0, 1, -3, -1)
    else:
        raise UnsupportedType(f"unsupported Cartan type {cartan_type!r}")
    return tuple(tuple(row) for row in A)


def symmetrizer(cartan_type: str, rank: int):
    """d_i with d_i A[i][j] symmetric and short roots having d = 1."""
    A = cartan_matrix(cartan_type, rank)
    d = [None] * rank
    d[0] = 1
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(rank):
            if i != j and A[i][j] and d[j] is None:
                # d_i A_ij = d_j A_ji
                f = Fraction(d[i] * A[i][j], A[j][i])
                d[j] = f
                queue.append(j)
    lcm_den = 1
    for x in d:
        lcm_den = lcm_den * x.denominator // _gcd(lcm_den, x.denominator)
    vals = [int(x * lcm_den) for x in d]
    g = 0
    for v in vals:
        g = _gcd(g, v)
    vals = [v // g for v in vals]
    # normalize so the minimum is 1
    mn = min(vals)
    assert mn == 1
    return tuple(vals)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def symmetric_pairing(cartan_type: str, rank: int):
    """<alpha_i, alpha_j> with short roots of squared length 2."""
    A = cartan_matrix(cartan_type, rank)
    d = symmetrizer(cartan_type, rank)
    return tuple(tuple(d[i] * A[i][j] for j in range(rank)) for i in range(rank))


def weyl_elements(cartan_type: str, rank: int):
    """All Weyl group elements as matrices acting on simple-root coordinates,
    together with Coxeter lengths (BFS depth in simple reflections)."""
    A = cartan_matrix(cartan_type, rank)
    r = rank
    ident = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))

    def refl_apply(i, w):
        # s_i(alpha_j) = alpha_j - A[i][j] alpha_i ; compose s_i o w
        out = []
        for col in range(r):
            vec = [w[row][col] for row in range(r)]
            new = list(vec)
            new[i] -= sum(A[i][j] * vec[j] for j in range(r))
            out.append(tuple(new))
        return tuple(tuple(out[col][row] for col in range(r)) for row in range(r))

    lengths = {ident: 0}
    queue = deque([ident])
    while queue:
        w = queue.popleft()
        for i in range(r):
            nw = refl_apply(i, w)
            if nw not in lengths:
                lengths[nw] = lengths[w] + 1
                queue.append(nw)
    return lengths


def positive_roots(cartan_type: str, rank: int):
    """Positive roots in simple-root coordinates."""
    A = cartan_matrix(cartan_type, rank)
    r = rank
    simple = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    roots = set(simple)
    queue = deque(simple)
    while queue:
        b = queue.popleft()
        for i in range(r):
            pairing = sum(A[i][j] * b[j] for j in range(r))
            nb = list(b)
            nb[i] -= pairing
            nb = tuple(nb)
            if all(x >= 0 for x in nb) and any(x > 0 for x in nb) and nb not in roots:
                roots.add(nb)
                queue.append(nb)
    return sorted(roots)


def rho(cartan_type: str, rank: int):
    """Half the sum of positive roots, in simple-root coordinates (Fractions)."""
    pos = positive_roots(cartan_type, rank)
    return tuple(Fraction(sum(v[i] for v in pos), 2) for i in range(rank))


def apply_matrix(w, vec):
    r = len(vec)
    return tuple(sum(w[i][j] * vec[j] for j in range(r)) for i in range(r))


def pairing(cartan_type: str, rank: int, a, b):
    B = symmetric_pairing(cartan_type, rank)
    return sum(B[i][j] * a[i] * b[j] for i in range(rank) for j in range(rank))
