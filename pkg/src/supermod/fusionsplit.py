"""Lifting condensed fusion rules to full super-modular fusion rules, and
building/factoring product data.

The splitting solver enumerates, by backtracking over symmetry orbits, all
ways to write nhat = N + N^f compatibly with the unit/duality axioms, the
Frobenius relations, full associativity, and (optionally) the exact balancing
identity.  Solutions are reported up to the X <-> fX relabeling gauge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iterproduct

from . import numberfield as nf
from .smc import (
    FusionTensor,
    ModularData,
    NaiveFusionTensor,
    Report,
    SMCData,
    check_balancing,
    induced_naive,
    naive_from_entries,
)


class NoSolution(Exception):
    """The condensed tensor admits no sVec-compatible splitting."""


class ExplosionGuard(Exception):
    """The backtracking search exceeded its node budget."""


class InconsistentFactorization(Exception):
    """An invertible label exists but its pairing breaks the product structure."""


@dataclass(frozen=True)
class SplitSolution:
    tensor: FusionTensor
    gauge: tuple  # flip mask applied to reach the canonical representative
    constraints_used: tuple

    def to_json(self):
        return {"tensor": self.tensor.to_json(), "gauge": list(self.gauge),
                "constraints_used": list(self.constraints_used)}


def _triple_orbit(i, j, k, dual):
    """Orbit of (i,j,k) under N_ij^k = N_ji^k = N_(k)(j*)^(i)."""
    seen = set()
    frontier = [(i, j, k)]
    while frontier:
        t = frontier.pop()
        if t in seen:
            continue
        seen.add(t)
        a, b, c = t
        frontier.append((b, a, c))
        frontier.append((c, dual[b], a))
    return seen


def _b_orbit(i, j, k, dual):
    """Orbit of (i,j,k) for the f-shifted sector N_ij^{fk}."""
    seen = set()
    frontier = [(i, j, k)]
    while frontier:
        t = frontier.pop()
        if t in seen:
            continue
        seen.add(t)
        a, b, c = t
        frontier.append((b, a, c))
        frontier.append((a, dual[c], dual[b]))  # N_ij^{fk} == N_i(k*)^{f j*}
        frontier.append((c, dual[b], a))        # N_ij^{fk} == N_k(j*)^{f i}
    return seen


def split_naive(nhat: NaiveFusionTensor, balance: SMCData | None = None,
                node_budget: int = 10 ** 7) -> list[SplitSolution]:
    """All splittings of a condensed tensor, up to the X <-> fX gauge."""
    r = nhat.r
    dual = nhat.dual_involution()
    sym = nhat.symmetry_report()
    if not sym.ok:
        raise NoSolution("condensed tensor violates its own symmetries")

    orbits = []
    orbit_of = {}
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if (i, j, k) in orbit_of:
                    continue
                orb = _triple_orbit(i, j, k, dual)
                idx = len(orbits)
                orbits.append(sorted(orb))
                for t in orb:
                    orbit_of[t] = idx
    # the naive tensor must be constant on each orbit
    domains = []
    forced = {}
    for idx, orb in enumerate(orbits):
        vals = {nhat.entries[a][b][c] for a, b, c in orb}
        if len(vals) != 1:
            raise NoSolution("condensed tensor not constant on symmetry orbits")
        total = vals.pop()
        i, j, k = orb[0]
        if any(a == 0 or b == 0 for a, b, _ in orb):
            # unit rows: N_0j^k = delta_jk, and nothing lands on f-shifted labels
            forced[idx] = None
        if any(c == 0 for _, _, c in orb):
            # duality: N_ij^0 = delta(i,j*) entirely in the plain sector,
            # since f X_i is never the dual of X_i
            forced[idx] = None
        domains.append(total)

    b_orbit_of = {}
    b_orbits = []
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if (i, j, k) in b_orbit_of:
                    continue
                orb = _b_orbit(i, j, k, dual)
                idx = len(b_orbits)
                b_orbits.append(sorted(orb))
                for t in orb:
                    b_orbit_of[t] = idx

    order = sorted(range(len(orbits)), key=lambda idx: domains[idx])
    assignment = [None] * len(orbits)
    nodes = 0
    raw_solutions = []

    def b_value_consistent(partial):
        """The induced f-sector values must be constant on their own orbits."""
        for orb in b_orbits:
            val = None
            for (a, b, c) in orb:
                av = partial.get(orbit_of[(a, b, c)])
                if av is None:
                    continue
                bv = nhat.entries[a][b][c] - av
                if val is None:
                    val = bv
                elif val != bv:
                    return False
        return True

    def recurse(pos):
        nonlocal nodes
        if pos == len(order):
            raw_solutions.append(dict(
                (idx, assignment[idx]) for idx in range(len(orbits))))
            return
        idx = order[pos]
        nodes += 1
        if nodes > node_budget:
            raise ExplosionGuard(f"node budget {node_budget} exceeded")
        i, j, k = orbits[idx][0]
        if idx in forced:
            choices = [nhat.entries[i][j][k]]
        else:
            choices = range(nhat.entries[i][j][k] + 1)
        for v in choices:
            assignment[idx] = v
            partial = {o: assignment[o] for o in order[:pos + 1]}
            if b_value_consistent(partial):
                recurse(pos + 1)
        assignment[idx] = None

    recurse(0)
    if not raw_solutions:
        raise NoSolution("no orbit assignment satisfies the f-sector symmetries")

    solutions = []
    constraints = ["unit", "duality", "frobenius", "associativity"]
    if balance is not None:
        constraints.append("balancing")
    seen_keys = set()
    for sol in raw_solutions:
        tensor = _materialize(nhat, dual, sol, orbit_of)
        if not tensor.validate().ok:
            continue
        if balance is not None:
            if not check_balancing(balance, tensor).ok:
                continue
        key, gauge, canon = _canonical_under_flips(tensor)
        if key in seen_keys:
            continue
        seen_keys.add(key)
        solutions.append(SplitSolution(tensor=canon, gauge=gauge,
                                       constraints_used=tuple(constraints)))
    if not solutions:
        raise NoSolution("all orbit assignments fail associativity"
                         + ("/balancing" if balance is not None else ""))
    solutions.sort(key=lambda s: (s.tensor.fperm, s.tensor.N))
    return solutions


def _materialize(nhat, dual, assignment, orbit_of) -> FusionTensor:
    """Block-convention full tensor from the plain-sector orbit values."""
    r = nhat.r
    rank = 2 * r
    fperm = tuple(list(range(r, rank)) + list(range(r)))
    n = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                a_val = assignment[orbit_of[(i, j, k)]]
                b_val = nhat.entries[i][j][k] - a_val
                n[i][j][k] = a_val
                n[i][j][k + r] = b_val
    for i in range(r):
        for j in range(r):
            for k in range(rank):
                kf = fperm[k]
                n[i + r][j][k] = n[i][j][kf]
                n[i][j + r][k] = n[i][j][kf]
                n[i + r][j + r][k] = n[i][j][k]
    return FusionTensor(rank=rank, fperm=fperm,
                        N=tuple(tuple(tuple(row) for row in plane)
                                for plane in n))


def _canonical_under_flips(tensor: FusionTensor):
    """Lexicographically smallest representative over X_i <-> f X_i flips."""
    r = tensor.r
    best = None
    best_gauge = None
    best_tensor = None
    for mask in range(1 << (r - 1)):
        full = list(range(tensor.rank))
        for i in range(1, r):
            if (mask >> (i - 1)) & 1:
                full[i] = i + r
                full[i + r] = i
        cand = tensor.relabel(full)
        key = (cand.fperm, cand.N)
        if best is None or key < best:
            best = key
            best_gauge = tuple(i for i in range(1, r) if (mask >> (i - 1)) & 1)
            best_tensor = cand
    return best, best_gauge, best_tensor


# -- Deligne products -----------------------------------------------------------


def deligne_product(a, b) -> SMCData:
    """Kronecker product of a modular factor with a super-modular factor.

    Exactly one facto carries the fermion; both must live in the same
    declared ambient field (the compositum is the caller's responsibility).
    """
    a_super = isinstance(a, SMCData)
    b_super = isinstance(b, SMCData)
    if a_super and b_super:
        raise ValueError("both factors carry a fermion")
    if not a_super and not b_super:
        raise ValueError("one factor must be super-modular data")
    mod, sup, mod_first = (a, b, True) if b_super else (b, a, False)
    if not isinstance(mod, ModularData):
        raise TypeError("modular factor must be ModularData")
    if not mod.field.same_field(sup.field):
        raise nf.FieldMismatchError(
            f"{mod.field.name} vs {sup.field.name}: declare a common compositum")
    if not mod.modular:
        raise ValueError("pointed factor is degenerate, not modular")

    p = mod.rank
    r = sup.r
    r_prod = p * r

    def qidx(ma, sb):
        return ma * r + sb if mod_first else sb * p + ma

    field = sup.field
    dims = [None] * r_prod
    hatT = None if (sup.hatT is None or mod.T is None) else [None] * r_prod
    hatS = [[None] * r_prod for _ in range(r_prod)]
    dual = [0] * r_prod
    mod_dual = mod.dual_involution()
    for ma in range(p):
        for sb in range(r):
            i = qidx(ma, sb)
            dims[i] = mod.dims[ma] * sup.dims[sb]
            if hatT is not None:
                hatT[i] = mod.T[ma] * sup.hatT[sb]
            dual[i] = qidx(mod_dual[ma], sup.dual[sb])
            for mc in range(p):
                for sd in range(r):
                    hatS[i][qidx(mc, sd)] = mod.S[ma][mc] * sup.hatS[sb][sd]

    fusion = None
    if sup.fusion is not None:
        sup_f = sup.fusion.to_block_convention()
        rank_prod = 2 * r_prod

        def fidx(ma, sb_full):
            # block convention on the product transversal
            if sb_full < r:
                return qidx(ma, sb_full)
            return r_prod + qidx(ma, sb_full - r)

        n = [[[0] * rank_prod for _ in range(rank_prod)] for _ in range(rank_prod)]
        for ma in range(p):
            for mb in range(p):
                for mc in range(p):
                    mult_m = mod.fusion[ma][mb][mc]
                    if not mult_m:
                        continue
                    for sa in range(2 * r):
                        for sbb in range(2 * r):
                            for sc in range(2 * r):
                                mult_s = sup_f.N[sa][sbb][sc]
                                if mult_s:
                                    n[fidx(ma, sa)][fidx(mb, sbb)][fidx(mc, sc)] \
                                        = mult_m * mult_s
        fperm = tuple(list(range(r_prod, rank_prod)) + list(range(r_prod)))
        fusion = FusionTensor(rank=rank_prod, fperm=fperm,
                              N=tuple(tuple(tuple(row) for row in plane)
                                      for plane in n))

    name = f"{mod.name}x{sup.name}" if mod_first else f"{sup.name}x{mod.name}"
    return SMCData(name=name, field=field, r=r_prod, dims=tuple(dims),
                   hatS=tuple(tuple(row) for row in hatS),
                   hatT=None if hatT is None else tuple(hatT),
                   dual=tuple(dual), fusion=fusion)


# -- invertible-object factorization ----------------------------------------------


def factor_by_invertible(data: SMCData):
    """Split off a two-dimensional pointed modular factor, if present.

    Looks for a label z != 0 with d_z == 1 and hatS[z][z] != 1; the
    complement is read off the centralizing transversal.  Returns
    (pointed ModularData, complement SMCData) or None.
    """
    if data.dual != tuple(range(data.r)):
        raise ValueError("factorization implemented for self-dual data only")
    r = data.r
    one = data.field.one()
    z = None
    for i in range(1, r):
        if data.dims[i] == one and data.hatS[i][i] != one:
            z = i
            break
    if z is None:
        return None
    S = data.hatS
    transversal = [i for i in range(r) if S[i][z] == data.dims[i]]
    if len(transversal) != r // 2 or 0 not in transversal or z in transversal:
        raise InconsistentFactorization(
            f"label {z}: centralizer does not split the labels in half")
    inv_d = [nf.nf_inverse(d) for d in data.dims]
    partner = {}
    for i in transversal:
        target_col = tuple(S[k][z] * S[k][i] * inv_d[k] for k in range(r))
        match = None
        for j in range(r):
            if tuple(S[k][j] for k in range(r)) == target_col:
                match = j
                break
        if match is None or match in transversal:
            raise InconsistentFactorization(
                f"label {z}: no partner column for label {i}")
        partner[i] = match
    if sorted(transversal + [partner[i] for i in transversal]) != list(range(r)):
        raise InconsistentFactorization(f"label {z}: pairing does not cover labels")

    sub = sorted(transversal)
    comp_dims = tuple(data.dims[i] for i in sub)
    comp_S = tuple(tuple(S[i][j] for j in sub) for i in sub)
    comp_T = None if data.hatT is None else tuple(data.hatT[i] for i in sub)
    complement = SMCData(name=f"{data.name}-complement", field=data.field,
                         r=len(sub), dims=comp_dims, hatS=comp_S, hatT=comp_T,
                         dual=tuple(range(len(sub))), fusion=None)
    # the complement must itself look super-modular at the S-matrix level
    from .smc import check_orthogonality

    if not check_orthogonality(complement).ok:
        raise InconsistentFactorization(
            f"label {z}: complement fails orthogonality")
    z2_fusion = ((( 1, 0), (0, 1)), ((0, 1), (1, 0)))
    pointed = ModularData(
        name=f"{data.name}-pointed-factor", field=data.field, rank=2,
        dims=(one, one),
        S=((one, one), (one, S[z][z])),
        T=None if data.hatT is None else (data.field.one(), data.hatT[z]),
        fusion=z2_fusion, modular=True)
    return pointed, complement


def detect_fib_subring(nhat: NaiveFusionTensor, split: SplitSolution):
    """A full label X with X (x) X = 1 + X, flagging a golden-ratio modular
    subcategory and hence non-primality."""
    tensor = split.tensor
    for x in range(1, tensor.rank):
        row = tensor.N[x][x]
        if row[0] == 1 and row[x] == 1 and sum(row) == 2:
            return x
    return None
