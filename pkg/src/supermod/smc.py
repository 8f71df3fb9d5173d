"""Data model and exact checkers for super-modular fermionic quotient data.

The quotient-first convention: a rank-2r category is stored as r x r data
(dims, hatS, hatT) over one declared field, together with the label dual and
optionally the full fusion tensor on 2r labels with its fermion action.
All checks are exact; reports carry the violated identities with residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations

from . import numberfield as nf
from .numberfield import (
    NFElement,
    FieldDescriptor,
    is_rational,
    multiplicative_order,
    nf_inverse,
    nf_sign,
)


class NonIntegralFusion(Exception):
    """A Verlinde sum failed to reduce to a nonnegative rational integer."""

    def __init__(self, i, j, k, value):
        self.indices = (i, j, k)
        self.value = value
        super().__init__(f"naive fusion ({i},{j},{k}) is not a nonnegative "
                         f"integer: {value!r}")


class FieldTooSmall(Exception):
    """Required products (theta * dim, ...) are not in the declared field."""


@dataclass
class Violation:
    identity: str
    where: tuple
    residual: str = ""

    def to_json(self):
        return {"identity": self.identity, "where": list(self.where),
                "residual": self.residual}


@dataclass
class Report:
    title: str
    checked: int = 0
    violations: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, identity, where, residual=""):
        self.violations.append(Violation(identity, tuple(where), residual))

    def to_json(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "checked": self.checked,
            "violations": [v.to_json() for v in self.violations],
            "notes": list(self.notes),
        }


def _residual(el) -> str:
    if isinstance(el, NFElement):
        return "[" + ",".join(nf.frac_str(c) for c in el.coeffs) + "]"
    return str(el)


@dataclass(frozen=True)
class NaiveFusionTensor:
    """Nonnegative-integer tensor of condensed fusion multiplicities."""

    r: int
    entries: tuple  # entries[i][j][k]

    def entry(self, i, j, k):
        return self.entries[i][j][k]

    def dual_involution(self):
        """dual(j) = the unique i with entries[i][j][0] == 1."""
        dual = []
        for j in range(self.r):
            hits = [i for i in range(self.r) if self.entries[i][j][0]]
            if len(hits) != 1:
                raise ValueError(f"label {j} has no unique dual in the tensor")
            dual.append(hits[0])
        return tuple(dual)

    def matrices(self):
        return [
            [[self.entries[i][j][k] for k in range(self.r)] for j in range(self.r)]
            for i in range(self.r)
        ]

    def symmetry_report(self):
        rep = Report("naive-tensor symmetries")
        try:
            dual = self.dual_involution()
        except ValueError as exc:
            rep.add("nhat[i][j][0] == delta(i, dual(j))", (), str(exc))
            return rep
        n = self.entries
        r = self.r
        for i in range(r):
            for j in range(r):
                rep.checked += 1
                want = 1 if i == dual[j] else 0
                if n[i][j][0] != want:
                    rep.add("nhat[i][j][0] == delta(i,j*)", (i, j),
                            str(n[i][j][0]))
                for k in range(r):
                    rep.checked += 3
                    if n[i][j][k] != n[j][i][k]:
                        rep.add("nhat symmetric in (i,j)", (i, j, k))
                    if n[i][j][k] != n[i][dual[k]][dual[j]]:
                        rep.add("nhat[i][j][k] == nhat[i][k*][j*]", (i, j, k))
                    if n[i][j][k] != n[dual[i]][dual[j]][dual[k]]:
                        rep.add("nhat[i][j][k] == nhat[i*][j*][k*]", (i, j, k))
        return rep

    def commutation_report(self):
        rep = Report("naive matrices commute")
        mats = self.matrices()
        r = self.r
        for i in range(r):
            for j in range(i + 1, r):
                rep.checked += 1
                a, b = mats[i], mats[j]
                ab = [[sum(a[x][m] * b[m][y] for m in range(r)) for y in range(r)]
                      for x in range(r)]
                ba = [[sum(b[x][m] * a[m][y] for m in range(r)) for y in range(r)]
                      for x in range(r)]
                if ab != ba:
                    rep.add("N_i N_j == N_j N_i", (i, j))
        return rep

    def to_json(self):
        return {"r": self.r, "entries": [[[int(v) for v in row] for row in plane]
                                         for plane in self.entries]}

    @staticmethod
    def from_json(doc):
        return NaiveFusionTensor(
            r=int(doc["r"]),
            entries=tuple(tuple(tuple(int(v) for v in row) for row in plane)
                          for plane in doc["entries"]),
        )


def naive_from_entries(entries) -> NaiveFusionTensor:
    r = len(entries)
    return NaiveFusionTensor(
        r=r, entries=tuple(tuple(tuple(int(v) for v in row) for row in plane)
                           for plane in entries))


@dataclass(frozen=True)
class FusionTensor:
    """Full fusion rules on 2r labels with a distinguished free fermion action.

    Convention: the fermion action permutation maps the quotient transversal
    {0..r-1} onto {r..2r-1}; the fermion itself is fperm[0].
    """

    rank: int
    fperm: tuple
    N: tuple  # N[i][j][k]

    @property
    def r(self):
        return self.rank // 2

    @property
    def fermion(self):
        return self.fperm[0]

    def entry(self, i, j, k):
        return self.N[i][j][k]

    def dual_involution(self):
        dual = []
        for i in range(self.rank):
            hits = [j for j in range(self.rank) if self.N[i][j][0]]
            if len(hits) != 1:
                raise ValueError(f"label {i} has no unique dual")
            dual.append(hits[0])
        return tuple(dual)

    def validate(self) -> Report:
        rep = Report("fusion-tensor axioms")
        n = self.N
        rank = self.rank
        fp = self.fperm
        if sorted(fp) != list(range(rank)):
            rep.add("fermion action is a permutation", ())
            return rep
        for i in range(rank):
            rep.checked += 1
            if fp[fp[i]] != i:
                rep.add("fermion action is an involution", (i,))
            if fp[i] == i:
                rep.add("fermion action is fixed-point free", (i,))
        if any(fp[i] < self.r for i in range(self.r)):
            rep.add("fermion action maps transversal onto its complement", ())
            return rep
        # unit axioms
        for j in range(rank):
            for k in range(rank):
                rep.checked += 1
                if n[0][j][k] != (1 if j == k else 0):
                    rep.add("N[0][j][k] == delta(j,k)", (j, k))
        try:
            dual = self.dual_involution()
        except ValueError as exc:
            rep.add("duality column", (), str(exc))
            return rep
        for i in range(rank):
            rep.checked += 1
            if dual[dual[i]] != i:
                rep.add("dual is an involution", (i,))
            if fp[i] == dual[i]:
                rep.add("f X is never the dual of X", (i,))
            if dual[fp[i]] != fp[dual[i]]:
                rep.add("dual commutes with the fermion action", (i,))
        # fermion fusion consistency: row of f X_i is the fperm-shift
        for i in range(rank):
            for j in range(rank):
                for k in range(rank):
                    rep.checked += 1
                    if n[fp[i]][j][k] != n[i][j][fp[k]]:
                        rep.add("N[f i][j][k] == N[i][j][f k]", (i, j, k))
        # associativity, all quadruples
        for i in range(rank):
            for j in range(rank):
                for k in range(rank):
                    for l in range(rank):
                        rep.checked += 1
                        lhs = sum(n[i][j][m] * n[m][k][l] for m in range(rank))
                        rhs = sum(n[j][k][m] * n[i][m][l] for m in range(rank))
                        if lhs != rhs:
                            rep.add("associativity", (i, j, k, l),
                                    f"{lhs}!={rhs}")
                            if len(rep.violations) > 16:
                                return rep
        return rep

    def relabel(self, full_perm) -> "FusionTensor":
        """New tensor with label i renamed full_perm[i]."""
        rank = self.rank
        inv = [0] * rank
        for i, p in enumerate(full_perm):
            inv[p] = i
        N = tuple(
            tuple(
                tuple(self.N[inv[i]][inv[j]][inv[k]] for k in range(rank))
                for j in range(rank)
            )
            for i in range(rank)
        )
        fperm = tuple(full_perm[self.fperm[inv[i]]] for i in range(rank))
        return FusionTensor(rank=rank, fperm=fperm, N=N)

    def to_block_convention(self) -> "FusionTensor":
        """Relabel so that the fermion action is i <-> i+r."""
        r = self.r
        full_perm = [0] * self.rank
        for i in range(r):
            full_perm[i] = i
            full_perm[self.fperm[i]] = i + r
        return self.relabel(full_perm)

    def to_json(self):
        return {"fperm": [int(v) for v in self.fperm],
                "N": [[[int(v) for v in row] for row in plane]
                      for plane in self.N]}

    @staticmethod
    def from_json(doc):
        N = tuple(tuple(tuple(int(v) for v in row) for row in plane)
                  for plane in doc["N"])
        return FusionTensor(rank=len(N), fperm=tuple(int(v) for v in doc["fperm"]),
                            N=N)


def fusion_from_products(rank, fperm, products) -> FusionTensor:
    """Build a tensor from a dict {(i, j): {k: mult}}, symmetrized, with the
    fermion-shifted rows filled in automatically."""
    n = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    r = rank // 2
    base = dict(products)
    for i in range(r):
        for j in range(r):
            row = base.get((i, j)) or base.get((j, i))
            if row is None:
                raise ValueError(f"missing product ({i},{j})")
            for k, mult in row.items():
                n[i][j][k] = mult
                n[j][i][k] = mult
    # extend to fermion-shifted labels: N[f i][j][k] = N[i][j][f k]
    for i in range(r):
        fi = fperm[i]
        for j in range(rank):
            for k in range(rank):
                n[fi][j][k] = n[i][j][fperm[k]]
    for i in range(rank):
        for j in range(r):
            fj = fperm[j]
            for k in range(rank):
                n[i][fj][k] = n[i][j][fperm[k]]
    return FusionTensor(rank=rank,
                        fperm=tuple(fperm),
                        N=tuple(tuple(tuple(row) for row in plane)
                                for plane in n))


def fusion_class_key(ft: FusionTensor):
    """Canonical form of the tensor modulo quotient relabelings fixing the
    unit and modulo the X <-> fX gauge flips."""
    blk = ft.to_block_convention()
    r = blk.r
    best = None
    for perm in permutations(range(1, r)):
        qperm = (0,) + perm
        for mask in range(1 << (r - 1)):
            full = [0] * blk.rank
            for i in range(r):
                target = qperm[i]
                if i and (mask >> (i - 1)) & 1:
                    full[i] = target + r
                    full[i + r] = target
                else:
                    full[i] = target
                    full[i + r] = target + r
            cand = blk.relabel(full)
            key = (cand.fperm, cand.N)
            if best is None or key < best:
                best = key
    return best


@dataclass(frozen=True)
class ModularData:
    """Plain modular (or premodular) data used as a product factor."""

    name: str
    field: FieldDescriptor
    rank: int
    dims: tuple
    S: tuple
    T: tuple
    fusion: tuple  # N[i][j][k] on `rank` labels
    modular: bool = True

    def dual_involution(self):
        dual = []
        for i in range(self.rank):
            hits = [j for j in range(self.rank) if self.fusion[i][j][0]]
            if len(hits) != 1:
                raise ValueError(f"label {i} has no unique dual")
            dual.append(hits[0])
        return tuple(dual)


@dataclass(frozen=True)
class SMCData:
    """Rank-2r super-modular quotient data over one declared field."""

    name: str
    field: FieldDescriptor
    r: int
    dims: tuple
    hatS: tuple
    hatT: tuple | None
    dual: tuple
    fusion: FusionTensor | None = None

    def d2_half(self) -> NFElement:
        acc = self.field.zero()
        for d in self.dims:
            acc = acc + d * d
        return acc

    def validate(self) -> Report:
        """Type-level invariants; the heavier identities live in the checkers."""
        rep = Report(f"{self.name}: data invariants")
        r = self.r
        if len(self.dims) != r or len(self.hatS) != r:
            rep.add("shape", (), "dims/hatS size mismatch")
            return rep
        if self.dual[0] != 0 or sorted(self.dual) != list(range(r)):
            rep.add("dual fixes 0 and is a permutation", ())
        for i in range(r):
            if self.dual[self.dual[i]] != i:
                rep.add("dual is an involution", (i,))
        if self.dims[0] != self.field.one():
            rep.add("d_0 == 1", (0,), _residual(self.dims[0]))
        for i in range(r):
            rep.checked += 1
            if self.hatS[0][i] != self.dims[i]:
                rep.add("hatS row 0 equals dims", (i,),
                        _residual(self.hatS[0][i] - self.dims[i]))
            try:
                if nf_sign(self.dims[i] - 1) < 0:
                    rep.add("d_i >= 1", (i,), _residual(self.dims[i]))
            except nf.NotRealError:
                rep.add("d_i is real", (i,))
        for i in range(r):
            for j in range(i + 1, r):
                rep.checked += 1
                if self.hatS[i][j] != self.hatS[j][i]:
                    rep.add("hatS symmetric", (i, j))
        if self.hatT is not None:
            if len(self.hatT) != r:
                rep.add("hatT length", ())
            else:
                if self.hatT[0] != self.field.one():
                    rep.add("theta_0 == 1", (0,), _residual(self.hatT[0]))
                for i, th in enumerate(self.hatT):
                    rep.checked += 1
                    order = multiplicative_order(th)
                    if order is None:
                        rep.add("theta_i is a root of unity (order cap)", (i,))
        if self.fusion is not None:
            if self.fusion.rank != 2 * r:
                rep.add("fusion rank == 2r", ())
        return rep

    def relabel(self, qperm) -> "SMCData":
        """Permute quotient labels (qperm[i] is the new name of label i)."""
        r = self.r
        inv = [0] * r
        for i, p in enumerate(qperm):
            inv[p] = i
        dims = tuple(self.dims[inv[i]] for i in range(r))
        hatS = tuple(tuple(self.hatS[inv[i]][inv[j]] for j in range(r))
                     for i in range(r))
        hatT = None if self.hatT is None else tuple(self.hatT[inv[i]]
                                                    for i in range(r))
        dual = tuple(qperm[self.dual[inv[i]]] for i in range(r))
        fusion = None
        if self.fusion is not None:
            blk = self.fusion.to_block_convention()
            full = [0] * (2 * r)
            for i in range(r):
                full[i] = qperm[i]
                full[i + r] = qperm[i] + r
            fusion = blk.relabel(full)
        return SMCData(name=self.name, field=self.field, r=r, dims=dims,
                       hatS=hatS, hatT=hatT, dual=dual, fusion=fusion)


# -- checkers ---------------------------------------------------------------------


def check_orthogonality(data: SMCData) -> Report:
    """hatS symmetric and hatS * conj(hatS) == (D^2/2) I, exactly."""
    rep = Report(f"{data.name}: orthogonality")
    r = data.r
    S = data.hatS
    for i in range(r):
        for j in range(i + 1, r):
            rep.checked += 1
            if S[i][j] != S[j][i]:
                rep.add("hatS symmetric", (i, j), _residual(S[i][j] - S[j][i]))
    d2h = data.d2_half()
    for i in range(r):
        for k in range(r):
            rep.checked += 1
            acc = data.field.zero()
            for j in range(r):
                acc = acc + S[i][j] * S[j][data.dual[k]]
            want = d2h if i == k else data.field.zero()
            if acc != want:
                rep.add("hatS * conj(hatS) == (D^2/2) I", (i, k),
                        _residual(acc - want))
    return rep


def verlinde_naive(data: SMCData) -> NaiveFusionTensor:
    """Condensed fusion multiplicities from the quotient Verlinde sum."""
    r = data.r
    S = data.hatS
    inv_d = [nf_inverse(d) for d in data.dims]
    inv_d2h = nf_inverse(data.d2_half())
    entries = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            for k in range(r):
                acc = data.field.zero()
                for m in range(r):
                    acc = acc + S[i][m] * S[j][m] * S[data.dual[k]][m] * inv_d[m]
                val = acc * inv_d2h
                q = is_rational(val)
                if q is None or q.denominator != 1 or q < 0:
                    raise NonIntegralFusion(i, j, k, None if q is None else q)
                entries[i][j][k] = int(q)
                entries[j][i][k] = int(q)
    return naive_from_entries(entries)


def check_divisibility(data: SMCData) -> Report:
    """d_i^2 divides D^2/2 in the ring of algebraic integers."""
    rep = Report(f"{data.name}: dimension divisibility")
    d2h = data.d2_half()
    for i, d in enumerate(data.dims):
        rep.checked += 1
        q = d2h * nf_inverse(d * d)
        if not is_algebraic_integer(q):
            rep.add("(D^2/2) / d_i^2 is an algebraic integer", (i,), _residual(q))
    return rep


def minimal_polynomial(a: NFElement) -> list[Fraction]:
    """Monic minimal polynomial of a over Q (coefficients constant-first)."""
    n = a.field.degree
    powers = [a.field.one()]
    rows = [list(powers[0].coeffs)]
    while True:
        # look for a dependency among 1, a, ..., a^m
        dep = _dependency(rows)
        if dep is not None:
            return dep
        powers.append(powers[-1] * a)
        rows.append(list(powers[-1].coeffs))
        if len(rows) > n + 1:
            raise nf.FieldError("minimal polynomial search exceeded the degree")


def _dependency(rows):
    """Monic combination c_0 row_0 + ... + row_m == 0, if one exists."""
    m = len(rows) - 1
    n = len(rows[0])
    mat = [[rows[j][i] for j in range(m)] for i in range(n)]
    rhs = [-rows[m][i] for i in range(n)]
    sol = _solve_overdetermined(mat, rhs)
    if sol is None:
        return None
    return sol + [Fraction(1)]


def _solve_overdetermined(mat, rhs):
    rows = len(mat)
    cols = len(mat[0]) if mat else 0
    m = [mat[i][:] + [rhs[i]] for i in range(rows)]
    pivots = []
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for r2 in range(rows):
            if r2 != rank and m[r2][col]:
                f = m[r2][col]
                m[r2] = [v - f * w for v, w in zip(m[r2], m[rank])]
        pivots.append(col)
        rank += 1
    for r2 in range(rank, rows):
        if m[r2][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for r2, col in enumerate(pivots):
        sol[col] = m[r2][cols]
    return sol


def is_algebraic_integer(a: NFElement) -> bool:
    return all(c.denominator == 1 for c in minimal_polynomial(a))


def check_balancing(data: SMCData, fusion: FusionTensor | None = None) -> Report:
    """theta_i theta_j hatS_ij == sum_k (N_ijk - N_ij(fk)) theta_k d_k."""
    rep = Report(f"{data.name}: balancing")
    fusion = fusion if fusion is not None else data.fusion
    if data.hatT is None:
        raise ValueError("balancing requires hatT")
    if fusion is None:
        raise ValueError("balancing requires a fusion tensor")
    if fusion.rank != 2 * data.r:
        raise FieldTooSmall("fusion tensor rank does not match the data")
    r = data.r
    th = data.hatT
    fp = fusion.fperm
    for i in range(r):
        for j in range(i, r):
            rep.checked += 1
            lhs = th[i] * th[j] * data.hatS[i][j]
            rhs = data.field.zero()
            for k in range(r):
                diff = fusion.N[i][j][k] - fusion.N[i][j][fp[k]]
                if diff:
                    rhs = rhs + Fraction(diff) * th[k] * data.dims[k]
            if lhs != rhs:
                rep.add("balancing identity", (i, j), _residual(lhs - rhs))
    return rep


def fs_indicator(data: SMCData, fusion_or_naive, i: int) -> NFElement:
    """Second Frobenius-Schur indicator of a self-dual quotient label."""
    if data.dual[i] != i:
        raise ValueError(f"label {i} is not self-dual")
    if data.hatT is None:
        raise ValueError("indicator requires hatT")
    if isinstance(fusion_or_naive, FusionTensor):
        nhat = induced_naive(fusion_or_naive)
    else:
        nhat = fusion_or_naive
    r = data.r
    th2 = [t * t for t in data.hatT]
    th2_inv = [nf_inverse(t) for t in th2]
    acc = data.field.zero()
    for j in range(r):
        for k in range(r):
            mult = nhat.entries[j][k][i]
            if mult:
                acc = acc + Fraction(mult) * data.dims[j] * data.dims[k] \
                    * th2[j] * th2_inv[k]
    return acc * nf_inverse(data.d2_half())


def induced_naive(fusion: FusionTensor) -> NaiveFusionTensor:
    """Condense the fermion: nhat_ijk = N_ijk + N_ij(fk) on the transversal."""
    r = fusion.r
    fp = fusion.fperm
    entries = [
        [[fusion.N[i][j][k] + fusion.N[i][j][fp[k]] for k in range(r)]
         for j in range(r)]
        for i in range(r)
    ]
    return naive_from_entries(entries)


def check_eigenvectors(data: SMCData, nhat: NaiveFusionTensor) -> Report:
    """Columns of hatS are simultaneous eigenvectors of the naive matrices."""
    rep = Report(f"{data.name}: hatS eigenvector identity")
    r = data.r
    S = data.hatS
    inv_d = [nf_inverse(d) for d in data.dims]
    for i in range(r):
        for k in range(r):
            lam = S[i][k] * inv_d[k]
            for j in range(r):
                rep.checked += 1
                acc = data.field.zero()
                for m in range(r):
                    mult = nhat.entries[i][j][m]
                    if mult:
                        acc = acc + Fraction(mult) * S[m][k]
                if acc != S[j][k] * lam:
                    rep.add("N_i hatS == hatS Lambda_i", (i, j, k),
                            _residual(acc - S[j][k] * lam))
    return rep


# -- JSON (SMCData schema v1) --------------------------------------------------------


def smc_to_json(data: SMCData) -> dict:
    doc = {
        "name": data.name,
        "field": nf.field_to_json(data.field),
        "r": data.r,
        "dual": [int(v) for v in data.dual],
        "dims": [nf.element_to_json(d) for d in data.dims],
        "hatS": [[nf.element_to_json(s) for s in row] for row in data.hatS],
    }
    if data.hatT is not None:
        doc["hatT"] = [nf.element_to_json(t) for t in data.hatT]
    if data.fusion is not None:
        doc["fusion"] = data.fusion.to_json()
    return doc


def smc_from_json(doc: dict) -> SMCData:
    field = nf.field_from_json(doc["field"])
    r = int(doc["r"])
    dims = tuple(nf.element_from_json(field, v) for v in doc["dims"])
    hatS = tuple(tuple(nf.element_from_json(field, s) for s in row)
                 for row in doc["hatS"])
    hatT = None
    if doc.get("hatT") is not None:
        hatT = tuple(nf.element_from_json(field, t) for t in doc["hatT"])
    fusion = None
    if doc.get("fusion") is not None:
        fusion = FusionTensor.from_json(doc["fusion"])
    return SMCData(name=doc.get("name", "smc"), field=field, r=r, dims=dims,
                   hatS=hatS, hatT=hatT,
                   dual=tuple(int(v) for v in doc["dual"]), fusion=fusion)
