"""Bicharacters, simple reflections, and Weyl groupoid enumeration.

A bicharacter is stored through the only data the construction consumes:
the diagonal values q_ii and the symmetrized products q_ij*q_ji, all roots
of unity, kept as integer exponents of a fixed primitive N-th root.  Bases
are integer matrices (columns in the original coordinates), so cones and
pairings stay computable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import random

from .cyclotomic import CycNum
from .errors import (Inadmissible, InadmissibleDiagonal, NotInGeneGroup,
                     Truncated, UnsupportedType)
from . import rootdata


@dataclass(frozen=True)
class BicharState:
    """(q_ii, q_ij q_ji) data with an ordered basis of Z^r.

    N is the root-of-unity order bound: all stored exponents are mod N.
    qdiag[i] is the exponent of q_ii; qsym[i][j] the exponent of
    q_ij * q_ji (qsym[i][i] = 2 * qdiag[i]).
    """

    N: int
    qdiag: tuple
    qsym: tuple
    basis: tuple  # r tuples, basis vectors in original coordinates

    @property
    def rank(self):
        return len(self.qdiag)

    def qdiag_value(self, i) -> CycNum:
        return CycNum.root_of_unity(self.N, self.qdiag[i])

    def qsym_value(self, i, j) -> CycNum:
        return CycNum.root_of_unity(self.N, self.qsym[i][j])

    def data_key(self):
        return (self.qdiag, self.qsym)

    def admissible(self, i) -> bool:
        return self.qdiag[i] % self.N != 0

    def order_qii(self, i) -> int:
        import math
        e = self.qdiag[i] % self.N
        if e == 0:
            return 1
        return self.N // math.gcd(self.N, e)

    def m_ij(self, i, j) -> int:
        """min m >= 0 with q_ii^(m+1) = 1 or q_ii^m q_ij q_ji = 1."""
        if not self.admissible(i):
            raise Inadmissible(f"basis not admissible at {i}")
        a = self.qdiag[i] % self.N
        s = self.qsym[i][j] % self.N
        m = 0
        while True:
            if (a * (m + 1)) % self.N == 0:
                return m
            if (a * m + s) % self.N == 0:
                return m
            m += 1


def bicharacter_matrix(M, n: int) -> BicharState:
    """q_ii = -gene^M_ii, sym products gene^M_ij, with gene = zeta_n."""
    r = len(M)
    N = n
    assert n % 2 == 0
    qdiag = tuple((M[i][i] + n // 2) % N for i in range(r))
    qsym = tuple(tuple((2 * qdiag[i]) % N if i == j else M[i][j] % N
                       for j in range(r)) for i in range(r))
    st = BicharState(N, qdiag, qsym, _identity_basis(r))
    _check_admissible(st)
    return st


def bicharacter_cartan(cartan_type: str, rank: int, v_order: int, v_exp: int = 1) -> BicharState:
    """q_ii = v^<a_i,a_i>, sym products v^(2<a_i,a_j>), with v = zeta_(v_order)^v_exp."""
    B = rootdata.symmetric_pairing(cartan_type, rank)
    r = rank
    N = v_order
    qdiag = tuple((v_exp * B[i][i]) % N for i in range(r))
    qsym = tuple(tuple((v_exp * 2 * B[i][j]) % N for j in range(r)) for i in range(r))
    st = BicharState(N, qdiag, qsym, _identity_basis(r))
    _check_admissible(st)
    return st


def bicharacter_dynkin(N: int, labels, edges) -> BicharState:
    """Direct generalized-Dynkin input: node exponents and edge exponents.

    labels[i] is the exponent of q_ii; edges is a dict {(i, j): exponent}
    for the symmetrized products (missing pairs mean no edge, exponent 0).
    """
    r = len(labels)
    qdiag = tuple(l % N for l in labels)
    sym = [[0] * r for _ in range(r)]
    for i in range(r):
        sym[i][i] = (2 * qdiag[i]) % N
    for (i, j), e in edges.items():
        sym[i][j] = sym[j][i] = e % N
    st = BicharState(N, qdiag, tuple(tuple(row) for row in sym), _identity_basis(r))
    _check_admissible(st)
    return st


def bicharacter_build(source: str, **kw) -> BicharState:
    if source == "matrix":
        return bicharacter_matrix(kw["M"], kw["n"])
    if source == "cartan":
        return bicharacter_cartan(kw["type"], kw["rank"], kw["v_order"], kw.get("v_exp", 1))
    if source == "dynkin":
        return bicharacter_dynkin(kw["N"], kw["labels"], kw["edges"])
    raise UnsupportedType(f"unknown bicharacter source {source!r}")


def _identity_basis(r):
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _check_admissible(st: BicharState):
    for i in range(st.rank):
        if not st.admissible(i):
            raise InadmissibleDiagonal(f"q_{i}{i} = 1")


def reflect(st: BicharState, i: int) -> BicharState:
    """Simple reflection at i: e_i -> -e_i, e_j -> e_j + m_ij e_i."""
    if not st.admissible(i):
        raise Inadmissible(f"not admissible at {i}")
    r = st.rank
    N = st.N
    m = [st.m_ij(i, j) if j != i else 0 for j in range(r)]
    a = st.qdiag[i]
    qdiag = list(st.qdiag)
    qsym = [list(row) for row in st.qsym]
    for j in range(r):
        if j == i:
            continue
        qdiag[j] = (st.qdiag[j] + m[j] * st.qsym[i][j] + m[j] * m[j] * a) % N
    for j in range(r):
        if j == i:
            continue
        qsym[i][j] = qsym[j][i] = (-st.qsym[i][j] - 2 * m[j] * a) % N
        for k in range(j + 1, r):
            if k == i:
                continue
            val = (st.qsym[j][k] + m[j] * st.qsym[i][k] + m[k] * st.qsym[i][j]
                   + 2 * m[j] * m[k] * a) % N
            qsym[j][k] = qsym[k][j] = val
    for j in range(r):
        qsym[j][j] = (2 * qdiag[j]) % N
    basis = [list(v) for v in st.basis]
    new_basis = []
    for j in range(r):
        if j == i:
            new_basis.append(tuple(-x for x in basis[i]))
        else:
            new_basis.append(tuple(x + m[j] * y for x, y in zip(basis[j], basis[i])))
    return BicharState(N, tuple(qdiag), tuple(tuple(row) for row in qsym), tuple(new_basis))


def object_matrix(st: BicharState, n: int):
    """The symmetric matrix M with gene^M_ii = -q_ii and gene^M_ij = q_ij q_ji.

    gene = zeta_n viewed inside zeta_N (requires n | N up to the usual
    embedding); raises NotInGeneGroup when a value is not a gene power.
    """
    N = st.N
    assert N % n == 0 or n % N == 0
    if n % N == 0:
        # re-express exponents in the larger group
        scale = n // N
        diag = [e * scale for e in st.qdiag]
        sym = [[e * scale for e in row] for row in st.qsym]
        N = n
    else:
        diag = list(st.qdiag)
        sym = [list(row) for row in st.qsym]
    step = N // n
    r = st.rank
    M = [[0] * r for _ in range(r)]
    for i in range(r):
        t = (diag[i] + N // 2) % N
        if t % step:
            raise NotInGeneGroup(f"-q_{i}{i} is not a power of gene")
        M[i][i] = (t // step) % n
        for j in range(i + 1, r):
            t = sym[i][j] % N
            if t % step:
                raise NotInGeneGroup(f"q_{i}{j} q_{j}{i} is not a power of gene")
            M[i][j] = M[j][i] = (t // step) % n
    return tuple(tuple(row) for row in M)


KUBOTA, DIRICHLET, NEITHER = "kubota", "dirichlet", "neither"


def classify_reflection(st: BicharState, i: int) -> str:
    """Dirichlet iff q_ii = -1; else Kubota iff all q_ij q_ji are powers of q_ii."""
    import math
    if not st.admissible(i):
        raise Inadmissible(f"not admissible at {i}")
    N = st.N
    a = st.qdiag[i] % N
    if N % 2 == 0 and a == N // 2:
        return DIRICHLET
    g = math.gcd(a, N)
    for j in range(st.rank):
        if j == i:
            continue
        if st.qsym[i][j] % g != 0:
            return NEITHER
    return KUBOTA


@dataclass
class GroupoidGraph:
    objects: dict                 # data_key -> representative BicharState
    edges: list                   # (source key, i, target key, kind)
    base_count: int
    truncated: bool
    skipped_inadmissible: int = 0

    def object_keys(self):
        return sorted(self.objects)

    def matrices(self, n):
        return {key: object_matrix(st, n) for key, st in self.objects.items()}


def groupoid_enumerate(st: BicharState, cutoff: int = 5000) -> GroupoidGraph:
    """Breadth-first closure of the basis under all admissible reflections."""
    start = st
    seen_bases = {(start.data_key(), start.basis)}
    objects = {start.data_key(): start}
    edges = set()
    skipped = 0
    queue = deque([start])
    truncated = False
    while queue:
        if len(seen_bases) > cutoff:
            truncated = True
            break
        cur = queue.popleft()
        for i in range(cur.rank):
            if not cur.admissible(i):
                skipped += 1
                continue
            kind = classify_reflection(cur, i)
            nxt = reflect(cur, i)
            edges.add((cur.data_key(), i, nxt.data_key(), kind))
            if nxt.data_key() not in objects:
                objects[nxt.data_key()] = nxt
            key = (nxt.data_key(), nxt.basis)
            if key not in seen_bases:
                seen_bases.add(key)
                queue.append(nxt)
    return GroupoidGraph(objects, sorted(edges), len(seen_bases), truncated, skipped)


def cone_cover_check(graph: GroupoidGraph, samples: int = 10_000, seed: int = 0,
                     span: int = 1000) -> bool:
    """Sampled check that the closed cones cover R^r with disjoint interiors.

    Sample vectors are integral, so membership tests are exact.
    """
    if graph.truncated:
        raise Truncated("groupoid enumeration was truncated")
    bases = set()
    for st in graph.objects.values():
        bases.add(st.basis)
    # collect every visited basis by re-running reflections from each object
    all_bases = _collect_bases(graph)
    rank = next(iter(graph.objects.values())).rank
    rng = random.Random(seed)
    for _ in range(samples):
        v = tuple(rng.randint(-span, span) for _ in range(rank))
        if all(x == 0 for x in v):
            continue
        inside = 0
        interior = 0
        for basis in all_bases:
            dots = [sum(x * y for x, y in zip(v, e)) for e in basis]
            if all(d >= 0 for d in dots):
                inside += 1
                if all(d > 0 for d in dots):
                    interior += 1
        if inside < 1:
            return False
        if interior > 1:
            return False
    return True


def _collect_bases(graph: GroupoidGraph):
    seen = set()
    queue = deque()
    for st in graph.objects.values():
        if st.basis not in seen:
            seen.add(st.basis)
            queue.append(st)
    out = {}
    while queue:
        cur = queue.popleft()
        out[cur.basis] = cur
        for i in range(cur.rank):
            if not cur.admissible(i):
                continue
            nxt = reflect(cur, i)
            if nxt.basis not in out and nxt.basis not in seen:
                seen.add(nxt.basis)
                queue.append(nxt)
    return sorted(out)


def graph_to_dot(graph: GroupoidGraph, n: int) -> str:
    mats = graph.matrices(n)
    names = {key: f"obj{idx}" for idx, key in enumerate(graph.object_keys())}
    lines = ["digraph weyl_groupoid {"]
    for key in graph.object_keys():
        label = ";".join(",".join(str(x) for x in row) for row in mats[key])
        lines.append(f'  {names[key]} [label="{label}"];')
    for src, i, dst, kind in graph.edges:
        lines.append(f'  {names[src]} -> {names[dst]} [label="s{i + 1}:{kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: GroupoidGraph, n: int):
    mats = graph.matrices(n)
    keys = graph.object_keys()
    index = {key: i for i, key in enumerate(keys)}
    return {
        "objects": [{"id": index[k], "M": [list(row) for row in mats[k]]} for k in keys],
        "edges": [{"source": index[s], "i": i + 1, "target": index[t], "kind": kind}
                  for s, i, t, kind in graph.edges],
        "base_count": graph.base_count,
        "truncated": graph.truncated,
    }
