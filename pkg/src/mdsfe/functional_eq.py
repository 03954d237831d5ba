"""Functional equations of the truncated series: scattering matrices, the
sigma/tau transformations, verification on coefficient tables, and the
fixpoint solver that reconstructs tables from the equations alone.

Every functional equation is applied with its denominator multiplied out,
turning it into finitely supported linear identities between coefficients:
 c[d_i] - R*c[d_i - n]  =  sum over a finite window of target coefficients.
All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .cyclotomic import CycNum
from .coefficients import (MdsConfig, MonoContext, UNKNOWN, CoeffTable,
                           _xi_m1_exp, global_sum_1var, global_sum_2var,
                           gauss_prime_mono, local_block_mono, mds_params)
from .errors import (InconsistentSystem, MissingNij, NoClosedForm,
                     NotConverged, NotDirichletNode, PossiblyInfiniteGroupoid,
                     Requires1Mod4, SupportViolation, Unclassifiable,
                     UnknownEntries)
from .finitefield import gauss_sum
from .groupoid import (DIRICHLET, KUBOTA, NEITHER, bicharacter_matrix,
                       classify_reflection, groupoid_enumerate)
from . import polyring as pr
from .ratfn import RatFn, ladd, lmono, lmul, lone, lscale, s_project, e_expand

ONE = CycNum.one()
ZERO = CycNum.zero()


# -- matrix / variable transformations --------------------------------------

def tau_apply(i: int, M, n: int):
    """The matrix transformation attached to a Dirichlet-type equation."""
    r = len(M)
    if M[i][i] % n != 0:
        raise NotDirichletNode(f"M[{i}][{i}] must vanish")
    e = [1 if M[i][j] % n else 0 for j in range(r)]
    out = [[0] * r for _ in range(r)]
    for j in range(r):
        for h in range(r):
            if j == i and h == i:
                out[j][h] = 0
            elif j == i:
                out[j][h] = (-M[i][h]) % n
            elif h == i:
                out[j][h] = (-M[j][i]) % n
            elif j == h:
                out[j][j] = (M[j][j] + e[j] * (M[j][i] + n // 2)) % n
            else:
                out[j][h] = (M[j][h] + e[j] * e[h] * (M[j][i] + M[h][i])) % n
    return tuple(tuple(row) for row in out)


def sigma_apply(kind: str, i: int, config: MdsConfig, ds):
    """Image of the monomial prod x_j^(d_j) under sigma_i.

    Returns (new exponent tuple, scalar CycNum) so truncated tables can be
    transformed without symbolic variables.
    """
    n = config.n
    q = CycNum.from_rational(config.field.q)
    if kind == KUBOTA:
        params = mds_params(config)
        if not params.kubota_available(i):
            raise MissingNij("Kubota transformation needs all p_ij = 0")
        c = (n // 2 + config.M[i][i]) % n
        g = gauss_sum(config.chi_power(c))
        dt = sum(params.n_ij[i][j] * ds[j] for j in range(config.r) if j != i)
        scalar = (g * g / (q * q)) ** ds[i] * (q / g) ** dt
        exps = list(ds)
        exps[i] = dt - ds[i]
        return tuple(exps), scalar
    if kind == DIRICHLET:
        if config.M[i][i] % n != 0:
            raise NotDirichletNode(f"M[{i}][{i}] must vanish")
        dt = 0
        scalar = q ** (-ds[i])
        for j in range(config.r):
            if j == i or config.M[i][j] % n == 0:
                continue
            dt += ds[j]
            scalar = scalar * gauss_sum(config.chi_power(config.M[i][j])) ** ds[j]
        exps = list(ds)
        exps[i] = dt - ds[i]
        return tuple(exps), scalar
    raise ValueError(f"unknown kind {kind!r}")


# -- scattering matrices -----------------------------------------------------

def _char_at_minus_one_exp(config, char_exp):
    """t with chi^char_exp(-1) = zeta_n^t."""
    return (char_exp * config.neg_one_exp()) % config.n


def kubota_gamma(config: MdsConfig, i: int, K: int, pi=None):
    """The n_i x n_i Kubota scattering matrix as rational functions.

    Entries are in the step variable y: for the global equation y is x
    itself, for the local one y stands for x^deg(pi).  Powers of q*x/g are
    folded into the coefficients.  Entry (k, l) is the sum of the diagonal
    branch (k = l mod n_i) and the reflection branch (k + l = 1 + K); their
    overlap reproduces the special monomial entries.
    """
    n = config.n
    if config.field.q % 4 != 1:
        raise Requires1Mod4("Kubota equations assume q = 1 mod 4")
    params = mds_params(config)
    if not params.kubota_available(i):
        raise MissingNij(f"p_ij nonzero at slot {i}")
    ni = params.n_i[i]
    if ni == 1:
        raise NoClosedForm("n_i = 1")
    c = (n // 2 + config.M[i][i]) % n
    g = gauss_sum(config.chi_power(c))
    q = CycNum.from_rational(config.field.q)
    e = pr.pdeg(pi) if pi is not None else None
    w = (q / g) ** (e or 1)                       # X = w * y
    if pi is None:
        unit = ONE - q
        R0 = q
    else:
        qe_inv = (ONE / q) ** e
        unit = ONE - qe_inv
        R0 = qe_inv
    den = ladd(lone(), lmono(ni, -(R0 * w ** ni)))
    eps_exp = _char_at_minus_one_exp(config, c)   # (xi chi^M_ii)(-1) = zeta_n^eps_exp
    ctx = MonoContext(config)
    mat = [[RatFn.zero() for _ in range(ni)] for _ in range(ni)]
    for k in range(ni):
        for l in range(ni):
            entry = RatFn.zero()
            if (k - l) % ni == 0:
                t = 1 - (K + 1 - 2 * k) % ni
                entry = entry + RatFn(lmono(t, unit * w ** t), den)
            if (k + l) % ni == (1 + K) % ni:
                sgn_exp = (eps_exp * ((l % ni) * (1 + K))) % n
                sgn = CycNum.root_of_unity(n, sgn_exp)
                cg = (c * (2 * k - K - 1)) % n
                if pi is None:
                    gg = gauss_sum(config.chi_power(cg))
                else:
                    gg = ctx.to_cyc(gauss_prime_mono(config, pi, cg)) * (ONE / q) ** e
                num = ladd(lmono(1, w), lmono(1 - ni, -(w ** (1 - ni))))
                entry = entry + RatFn(lscale(num, sgn * gg), den)
            mat[k][l] = entry
    return mat


def kubota_expanded(config: MdsConfig, i: int, k_other, pi=None):
    """The n x n expanded Kubota matrix with the chi(-1) twists folded in.

    k_other: exponents of the remaining variables (classes suffice).
    Returns (matrix, K, v_i).
    """
    n = config.n
    params = mds_params(config)
    others = [j for j in range(config.r) if j != i]
    kw = dict(zip(others, k_other))
    K = sum(params.n_ij[i][j] * kw[j] for j in others) % n
    v_i = sum(config.M[i][j] * kw[j] for j in others if j > i) % n
    gamma = kubota_gamma(config, i, K % params.n_i[i], pi=pi)
    big = e_expand(gamma, K, params.n_i[i], n)
    scale = pr.pdeg(pi) if pi is not None else 1
    for k in range(n):
        for l in range(n):
            if big[k][l].is_zero():
                continue
            t = (_char_at_minus_one_exp(config, v_i) * (k + l) * scale) % n
            if t:
                big[k][l] = big[k][l] * CycNum.root_of_unity(n, t)
    return big, K, v_i


def scattering_kubota(config: MdsConfig, i: int, K: int, pi=None):
    """Spec-level accessor for the raw n_i x n_i matrix."""
    return kubota_gamma(config, i, K, pi=pi)


def dirichlet_omega(config: MdsConfig, i: int, d_other) -> CycNum:
    """The sign omega attached to a Dirichlet equation (exact root of unity)."""
    n = config.n
    others = [j for j in range(config.r) if j != i]
    dw = dict(zip(others, d_other))
    t = 0
    for j in others:
        if config.M[j][i] % n:
            t += _xi_m1_exp(config) * ((dw[j] * (dw[j] - 1) // 2) % 2)
    for a_idx, h in enumerate(others):
        for j in others[a_idx + 1:]:
            if config.M[h][i] % n and config.M[j][i] % n:
                t += _char_at_minus_one_exp(config, config.M[h][i]) * dw[h] * dw[j]
    return CycNum.root_of_unity(n, t % n)


def dirichlet_theta(config: MdsConfig, i: int, d_other, pi=None):
    """(prefactor, n x n Theta matrix with chi(-1) twists folded in, K, v, b).

    d_other are the exponents of the remaining variables (actual values;
    only their classes and parities enter).
    """
    n = config.n
    if config.M[i][i] % n != 0:
        raise NotDirichletNode(f"M[{i}][{i}] must vanish")
    q = CycNum.from_rational(config.field.q)
    others = [j for j in range(config.r) if j != i]
    dw = dict(zip(others, d_other))
    v = sum(config.M[j][i] * dw[j] for j in others) % n
    v_i = sum(config.M[i][j] * dw[j] for j in others if j > i) % n
    K = sum((1 if config.M[i][j] % n else 0) * dw[j] for j in others) % n
    b = 1 if v % n == 0 else 0
    e = pr.pdeg(pi) if pi is not None else None
    scale = e or 1
    omega = dirichlet_omega(config, i, d_other)
    if pi is None:
        pre = omega
        if not b:
            pre = pre / gauss_sum(config.chi_power(v))
    else:
        pre = omega ** e
        if not b:
            gv = gauss_sum(config.chi_power(v))
            pre = pre * (-((-gv) ** e) / q ** e).inverse()
        if (e + 1) * K % 2:
            pre = -pre
        field = config.field
        rp = pr.root_product(field, pr.pderiv(field, pi), pi)
        texp = (field.dlog(rp) * ((-v - K * (n // 2)) % n)) % n if rp else None
        pre = pre * CycNum.root_of_unity(n, texp)
    if pi is None:
        den = ladd(lone(), lmono(n, -(q ** n)))
    else:
        den = ladd(lone(), lmono(n, -ONE))
    mat = [[RatFn.zero() for _ in range(n)] for _ in range(n)]
    qe = q ** scale
    inv_qe = ONE / qe
    for k in range(n):
        for l in range(n):
            anti = (k + l) % n == (K - 1) % n
            if b:
                if anti:
                    if pi is None:
                        entry = RatFn(ladd(lmono(n - 1, q ** (n - 1)), lmono(-1, -ONE)), den)
                    else:
                        entry = RatFn(lscale(ladd(lmono(n - 1, qe), lmono(-1, -ONE)), inv_qe), den)
                else:
                    s = (k + l - K + 1) % n
                    if pi is None:
                        entry = RatFn(lmono(s - 1, (ONE / q - ONE) * q ** s), den)
                    else:
                        entry = RatFn(lmono(s - 1, inv_qe * (qe - ONE)), den)
            else:
                entry = RatFn(lmono(-1, inv_qe if pi is not None else ONE)) if anti else RatFn.zero()
            t = (_char_at_minus_one_exp(config, (v + v_i) % n) * (k + l) * scale) % n
            if t and not entry.is_zero():
                entry = entry * CycNum.root_of_unity(n, t)
            mat[k][l] = entry
    return pre, mat, K, v, b


def scattering_dirichlet(config: MdsConfig, i: int, d_other, pi=None):
    pre, mat, K, v, b = dirichlet_theta(config, i, d_other, pi=pi)
    return mat, pre


# -- window equations --------------------------------------------------------

def _den_multiplied(mat, n):
    """(rows, ratio): entries times the common denominator 1 - ratio*y^n.

    rows[(k, l)] is a dict t -> CycNum.  Entries must be Laurent or share
    the same geometric denominator.
    """
    ratio = None
    size = len(mat)
    geom = []
    for k in range(size):
        for l in range(size):
            fn = mat[k][l]
            if fn.is_zero():
                continue
            num, rat, p = fn.geometric_parts()
            if rat is not None:
                if p != n:
                    raise SupportViolation(f"denominator period {p} != {n}")
                if ratio is None:
                    ratio = rat
                elif ratio != rat:
                    raise SupportViolation("mixed denominator ratios")
            geom.append((k, l, num, rat))
    rows = {}
    for k, l, num, rat in geom:
        if rat is None and ratio is not None:
            num = ladd(num, lmono(n, -ratio) if False else lmul(num, lmono(n, -ratio)))
            # num * (1 - ratio*y^n): recompute cleanly below
    rows = {}
    for k, l, num, rat in geom:
        if rat is None and ratio is not None:
            num = ladd(num, lmul(num, lmono(n, -ratio)))
        rows[(k, l)] = num
    return rows, ratio


@dataclass
class EquationFamily:
    """Coefficient identities induced by one functional equation."""

    config: MdsConfig            # source object
    i: int
    kind: str
    pi: tuple | None = None      # local prime, None for the global equation

    def __post_init__(self):
        n = self.config.n
        self.n = n
        self.scale = pr.pdeg(self.pi) if self.pi is not None else 1
        self.q = CycNum.from_rational(self.config.field.q)
        self.params = mds_params(self.config)
        if self.kind == KUBOTA:
            self.target_M = self.config.M
            c = (n // 2 + self.config.M[self.i][self.i]) % n
            g = gauss_sum(self.config.chi_power(c))
            self.transport = (g * g / (self.q * self.q)) ** self.scale
            self.prefactor_base = (self.q / g) ** self.scale
        else:
            self.target_M = tau_apply(self.i, self.config.M, n)
            self.transport = (ONE / self.q) ** self.scale
            self.gauss_bases = {}
            for j in range(self.config.r):
                if j != self.i and self.config.M[self.i][j] % n:
                    gj = gauss_sum(self.config.chi_power(self.config.M[self.i][j]))
                    self.gauss_bases[j] = gj ** self.scale
        self._ctx_cache = {}
        self._tr_pows = [ONE]

    def _transport_pow(self, d):
        while len(self._tr_pows) <= d:
            self._tr_pows.append(self._tr_pows[-1] * self.transport)
        return self._tr_pows[d]

    def dtilde(self, d_other):
        others = [j for j in range(self.config.r) if j != self.i]
        if self.kind == KUBOTA:
            return sum(self.params.n_ij[self.i][j] * d
                       for j, d in zip(others, d_other))
        return sum((1 if self.config.M[self.i][j] % self.n else 0) * d
                   for j, d in zip(others, d_other))

    def context(self, d_other):
        """(rows, den_ratio, pre) for the given other-variable exponents."""
        ckey = tuple(d % (2 * self.n) for d in d_other)
        cached = self._ctx_cache.get(ckey)
        if cached is None:
            if self.kind == KUBOTA:
                mat, K, v_i = kubota_expanded(self.config, self.i, ckey, pi=self.pi)
                rows, ratio = _den_multiplied(mat, self.n)
                cached = (rows, ratio, None)
            else:
                pre, mat, K, v, b = dirichlet_theta(self.config, self.i, ckey, pi=self.pi)
                rows, ratio = _den_multiplied(mat, self.n)
                cached = (rows, ratio, pre)
            self._ctx_cache[ckey] = cached
        rows, ratio, pre_static = cached
        if self.kind == KUBOTA:
            pre = self.prefactor_base ** self.dtilde(d_other)
        else:
            pre = pre_static
            others = [j for j in range(self.config.r) if j != self.i]
            for j, d in zip(others, d_other):
                base = self.gauss_bases.get(j)
                if base is not None and d:
                    pre = pre * base ** d
        return rows, ratio, pre

    def equation(self, d_other, d_i, limit):
        """Linear identity sum(coeff * c[ref]) = 0 or None if out of range.

        refs are (matrix, exponent tuple) with exponents in step units.
        """
        rows, ratio, pre = self.context(d_other)
        dt = self.dtilde(d_other)
        n = self.n
        k = d_i % n
        terms = {}

        def add(Mkey, vec, coeff):
            key = (Mkey, vec)
            cur = terms.get(key)
            terms[key] = coeff if cur is None else cur + coeff

        src_vec = self._vec(d_other, d_i)
        add(self.config.M, src_vec, ONE)
        if ratio is not None and d_i - n >= 0:
            add(self.config.M, self._vec(d_other, d_i - n), -ratio)
        for l in range(n):
            row = rows.get((k, l))
            if not row:
                continue
            for t, coeff in row.items():
                dprime = dt + t - d_i
                if dprime < 0:
                    continue
                if dprime % n != l:
                    continue
                if dprime > limit:
                    return None
                full = pre * self._transport_pow(dprime) * coeff
                add(self.target_M, self._vec(d_other, dprime), -full)
        return [(ref, c) for ref, c in terms.items() if not c.is_zero()]

    def _vec(self, d_other, d_i):
        vec = list(d_other)
        vec.insert(self.i, d_i)
        return tuple(vec)


# -- verification and the solver ---------------------------------------------

@dataclass
class FeReport:
    checked: int = 0
    nonzero: list = dc_field(default_factory=list)
    undetermined: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.nonzero


@dataclass
class GroupoidSeriesSet:
    """Solved (or assembled) coefficient tables for every groupoid object."""

    config: MdsConfig
    graph: object
    tables: dict                   # matrix -> {exponent tuple: CycNum}
    bound: int                     # in step units
    mode: str = "global"
    pi: tuple | None = None

    def table(self, M=None):
        return self.tables[M if M is not None else self.config.M]

    def families(self):
        fams = []
        mats = self.graph.matrices(self.config.n)
        for key in self.graph.object_keys():
            M = mats[key]
            cfg = MdsConfig(self.config.field, self.config.n, M)
            for i in range(self.config.r):
                kind = classify_reflection(self.graph.objects[key], i)
                if kind == NEITHER:
                    raise Unclassifiable(f"direction {i} of {M} is neither type")
                fams.append(EquationFamily(cfg, i, kind, pi=self.pi))
        return fams


def _tuples_upto(r, limit):
    if r == 0:
        yield ()
        return
    for first in range(limit + 1):
        for rest in _tuples_upto(r - 1, limit):
            yield (first,) + rest


def fe_verify(series: GroupoidSeriesSet, i=None, kind=None, D=None) -> FeReport:
    """Exact residual check of the functional equations on filled tables."""
    report = FeReport()
    D = D if D is not None else series.bound
    limit = max(max(vec) for tab in series.tables.values() for vec in tab) if series.tables else 0
    for fam in series.families():
        if i is not None and fam.i != i:
            continue
        if kind is not None and fam.kind != kind:
            continue
        src = series.tables[fam.config.M]
        tgt = series.tables[fam.target_M]
        r = fam.config.r
        for d_other in _tuples_upto(r - 1, D):
            for d_i in range(D + 1):
                eq = fam.equation(d_other, d_i, limit)
                if eq is None:
                    report.undetermined.append((fam.config.M, fam.i, d_other, d_i))
                    continue
                total = ZERO
                missing = False
                for (Mkey, vec), coeff in eq:
                    tab = src if Mkey == fam.config.M else tgt
                    val = tab.get(vec)
                    if val is None:
                        missing = True
                        break
                    total = total + coeff * val
                if missing:
                    report.undetermined.append((fam.config.M, fam.i, d_other, d_i))
                elif total.is_zero():
                    report.checked += 1
                else:
                    report.nonzero.append((fam.config.M, fam.i, d_other, d_i))
    return report


def _seed_global(cfg: MdsConfig, limit):
    """Closed-form global entries: full tables for r = 1, the 0/1 rows and
    columns for r = 2."""
    seeds = {}
    M = cfg.M
    if cfg.r == 1:
        for d in range(limit + 1):
            seeds[(d,)] = global_sum_1var(cfg, d, M[0][0])
        return seeds
    if cfg.r == 2:
        swap = ((M[1][1], M[0][1]), (M[0][1], M[0][0]))
        sign_exp = _char_at_minus_one_exp(cfg, M[0][1])
        for d in range(limit + 1):
            seeds[(0, d)] = global_sum_1var(cfg, d, M[1][1])
            seeds[(d, 0)] = global_sum_1var(cfg, d, M[0][0])
            seeds[(1, d)] = global_sum_2var(cfg, d, M)
            tw = CycNum.root_of_unity(cfg.n, (sign_exp * d) % cfg.n)
            seeds[(d, 1)] = tw * global_sum_2var(cfg, d, swap)
        return seeds
    # higher rank: seed the locally-computable entries by enumeration
    from .coefficients import series_truncate
    from .errors import DegreeTooLarge
    try:
        small = min(limit, 4)
        tab = series_truncate(cfg, "global", small, enum_limit=200_000)
        seeds.update(tab.entries)
    except DegreeTooLarge:
        pass
    return seeds


def _seed_local(cfg: MdsConfig, pi, limit):
    seeds = {}
    ctx = MonoContext(cfg)
    for vec in _tuples_upto(cfg.r, limit):
        try:
            mono = local_block_mono(cfg, pi, vec)
        except NoClosedForm:
            continue
        seeds[vec] = ctx.to_cyc(mono)
    return seeds


def fe_solve(config: MdsConfig, D: int, cutoff: int = 5000, mode: str = "global",
             pi=None, margin=None, require_converged=True) -> GroupoidSeriesSet:
    """Fixpoint propagation of all functional equations of the groupoid.

    Tables are seeded with the closed-form coefficients, then every window
    identity with exactly one unknown determines it; iteration continues
    until nothing changes.  A final pass checks every fully determined
    identity exactly; any nonzero residual raises InconsistentSystem.
    """
    n = config.n
    st = bicharacter_matrix(config.M, n)
    graph = groupoid_enumerate(st, cutoff)
    if graph.truncated:
        raise PossiblyInfiniteGroupoid(f"more than {cutoff} bases")
    scale = pr.pdeg(pi) if pi is not None else 1
    rep = D // scale
    limit = rep + (n if margin is None else margin) + 2
    series = GroupoidSeriesSet(config, graph, {}, rep, mode=mode, pi=pi)
    mats = graph.matrices(n)
    for key in graph.object_keys():
        M = mats[key]
        cfg = MdsConfig(config.field, n, M)
        if mode == "global":
            series.tables[M] = _seed_global(cfg, limit)
        else:
            series.tables[M] = _seed_local(cfg, pi, limit)
        series.tables[M][(0,) * config.r] = ONE
    fams = series.families()
    changed = True
    while changed:
        changed = False
        for fam in fams:
            src = series.tables[fam.config.M]
            tgt = series.tables[fam.target_M]
            r = fam.config.r
            for d_other in _tuples_upto(r - 1, limit):
                for d_i in range(limit + 1):
                    eq = fam.equation(d_other, d_i, limit)
                    if eq is None:
                        continue
                    unknown_ref = None
                    unknown_coeff = None
                    total = ZERO
                    bad = False
                    for (Mkey, vec), coeff in eq:
                        tab = src if Mkey == fam.config.M else tgt
                        val = tab.get(vec)
                        if val is None:
                            if unknown_ref is None:
                                unknown_ref = (Mkey, vec)
                                unknown_coeff = coeff
                            else:
                                bad = True
                                break
                        else:
                            total = total + coeff * val
                    if bad or unknown_ref is None:
                        continue
                    value = -(total / unknown_coeff)
                    series.tables[unknown_ref[0]][unknown_ref[1]] = value
                    changed = True
    # consistency pass over every fully determined identity
    for fam in fams:
        src = series.tables[fam.config.M]
        tgt = series.tables[fam.target_M]
        r = fam.config.r
        for d_other in _tuples_upto(r - 1, limit):
            for d_i in range(limit + 1):
                eq = fam.equation(d_other, d_i, limit)
                if eq is None:
                    continue
                total = ZERO
                complete = True
                for (Mkey, vec), coeff in eq:
                    tab = src if Mkey == fam.config.M else tgt
                    val = tab.get(vec)
                    if val is None:
                        complete = False
                        break
                    total = total + coeff * val
                if complete and not total.is_zero():
                    raise InconsistentSystem(
                        f"nonzero residual at {fam.config.M} i={fam.i} {d_other} {d_i}")
    missing = []
    for M, tab in series.tables.items():
        for vec in _tuples_upto(config.r, rep):
            if vec not in tab:
                missing.append((M, vec))
    if missing and require_converged:
        raise NotConverged(unknowns=missing)
    # trim to the reported bound
    for M in list(series.tables):
        series.tables[M] = {vec: val for vec, val in series.tables[M].items()
                            if max(vec) <= rep}
    return series


# -- rational function verification ------------------------------------------

def rational_verify(entries: dict, num: dict, den: dict, D: int, r: int) -> bool:
    """Expand num/den as a multivariate power series and compare with entries.

    num and den map exponent tuples to CycNum; den must have an invertible
    constant term.  Comparison runs over all table entries of total degree
    at most D.
    """
    zero_vec = (0,) * r
    d0 = den.get(zero_vec)
    if d0 is None or d0.is_zero():
        raise ValueError("denominator needs an invertible constant term")
    d0_inv = d0.inverse()
    coeffs = {}

    def total(vec):
        return sum(vec)

    for deg in range(D + 1):
        for vec in _tuples_exact(r, deg):
            val = num.get(vec, ZERO)
            for dvec, dc in den.items():
                if dvec == zero_vec:
                    continue
                sub = tuple(a - b for a, b in zip(vec, dvec))
                if any(x < 0 for x in sub):
                    continue
                prev = coeffs.get(sub)
                if prev is not None:
                    val = val - dc * prev
            coeffs[vec] = val * d0_inv
    for vec, val in entries.items():
        if total(vec) <= D:
            if coeffs.get(vec, ZERO) != val:
                return False
    return True


def _tuples_exact(r, total):
    if r == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _tuples_exact(r - 1, total - first):
            yield (first,) + rest


def quadratic_overlap_check(config: MdsConfig, i: int, d_other) -> bool:
    """Entrywise identity between the expanded Kubota matrix and the
    Dirichlet matrix times g^(b-1) in the quadratic overlap case."""
    n = config.n
    for j in range(config.r):
        if j != i and config.M[i][j] % (n // 2):
            raise NotDirichletNode("overlap case needs n/2 | M_ij")
    if config.M[i][i] % n:
        raise NotDirichletNode("overlap case needs M_ii = 0")
    big, K, v_i = kubota_expanded(config, i, d_other)
    pre, theta, K2, v, b = dirichlet_theta(config, i, d_other)
    assert K % 2 == K2 % 2
    gv = gauss_sum(config.chi_power(v))
    factor = ONE if b else gv.inverse()
    for k in range(n):
        for l in range(n):
            lhs = big[k][l]
            rhs = theta[k][l] * factor
            if not (lhs == rhs):
                return False
    return True
