"""Galois symmetries of the quotient S-matrix as label permutations.

Every declared field automorphism permutes the normalized columns of hatS;
the distinct permutations form an abelian group.  Completeness against
[Q(hatS):Q] is checked by spanning the subalgebra generated by the entries,
so no splitting-field machinery is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations

from . import numberfield as nf
from .smc import Report, SMCData, _residual


class NoMatchingPermutation(Exception):
    def __init__(self, auto_id):
        self.auto_id = auto_id
        super().__init__(
            f"automorphism {auto_id} does not permute the normalized columns")


class AmbiguousPermutation(Exception):
    def __init__(self, auto_id):
        self.auto_id = auto_id
        super().__init__(f"degenerate columns: permutation for {auto_id} not unique")


class NotRank4(Exception):
    pass


class Stratum(Enum):
    """The relabeling classes (unit label fixed) of abelian subgroups of S4."""

    TRIVIAL = ("<(0)>", "trivial")
    Z2_01 = ("<(01)>", "Z2-01")
    Z2_23 = ("<(23)>", "Z2-23")
    Z2_PAIRFLIP = ("<(01)(23)>", "Z2-pairflip")
    KLEIN_FREE = ("<(01)(23),(02)(13)>", "Klein4")
    KLEIN_TRANSPOSITIONS = ("<(01),(23)>", "Z2xZ2-transpositions")
    Z3_012 = ("<(012)>", "Z3")
    Z3_123 = ("<(123)>", "Z3-123")
    Z4 = ("<(0123)>", "Z4")

    @property
    def table_label(self):
        return self.value[0]

    @property
    def alias(self):
        return self.value[1]

    def __str__(self):
        return self.table_label

    @staticmethod
    def parse(text):
        t = text.strip()
        for s in Stratum:
            if t == s.table_label or t.lower() == s.alias.lower():
                return s
        norm = t.replace(" ", "")
        for s in Stratum:
            if norm == s.table_label:
                return s
        raise ValueError(f"unknown stratum label: {text!r}")


_ID4 = (0, 1, 2, 3)


def _cycle_group(*gens):
    group = {_ID4}
    frontier = list(gens)
    while frontier:
        g = frontier.pop()
        if g in group:
            continue
        group.add(g)
        for h in list(group):
            frontier.append(tuple(g[h[i]] for i in range(4)))
            frontier.append(tuple(h[g[i]] for i in range(4)))
    return frozenset(group)


_REFERENCE_GROUPS = {
    Stratum.TRIVIAL: _cycle_group(),
    Stratum.Z2_01: _cycle_group((1, 0, 2, 3)),
    Stratum.Z2_23: _cycle_group((0, 1, 3, 2)),
    Stratum.Z2_PAIRFLIP: _cycle_group((1, 0, 3, 2)),
    Stratum.KLEIN_FREE: _cycle_group((1, 0, 3, 2), (2, 3, 0, 1)),
    Stratum.KLEIN_TRANSPOSITIONS: _cycle_group((1, 0, 2, 3), (0, 1, 3, 2)),
    Stratum.Z3_012: _cycle_group((1, 2, 0, 3)),
    Stratum.Z3_123: _cycle_group((0, 2, 3, 1)),
    Stratum.Z4: _cycle_group((1, 2, 3, 0)),
}


@dataclass(frozen=True)
class GaloisGroup:
    """Distinct label permutations induced by the declared automorphisms."""

    r: int
    elements: tuple  # ((auto_id, perm), ...) sorted by perm
    generators: tuple

    @property
    def perms(self):
        return tuple(p for _, p in self.elements)

    @property
    def order(self):
        return len(self.elements)

    def auto_for(self, perm):
        for auto_id, p in self.elements:
            if p == perm:
                return auto_id
        raise KeyError(perm)

    def to_json(self):
        return {
            "r": self.r,
            "elements": [{"automorphism": a, "permutation": list(p)}
                         for a, p in self.elements],
            "generators": [list(p) for p in self.generators],
        }


def _normalized_columns(data: SMCData):
    inv_d = [nf.nf_inverse(d) for d in data.dims]
    return [tuple(data.hatS[i][k] * inv_d[k] for i in range(data.r))
            for k in range(data.r)]


def compute_galois_group(data: SMCData) -> GaloisGroup:
    """Permutation action of every declared automorphism on hatS columns."""
    r = data.r
    cols = _normalized_columns(data)
    col_index = {}
    for k, col in enumerate(cols):
        if col in col_index:
            raise AmbiguousPermutation("identity")
        col_index[col] = k
    seen = {}
    for auto_id in sorted(data.field.automorphism_ids):
        perm = []
        for k in range(r):
            image = tuple(data.field.apply_auto_id(auto_id, v) for v in cols[k])
            target = col_index.get(image)
            if target is None:
                raise NoMatchingPermutation(auto_id)
            perm.append(target)
        perm = tuple(perm)
        if sorted(perm) != list(range(r)):
            raise NoMatchingPermutation(auto_id)
        if perm not in seen:
            seen[perm] = auto_id
    elements = tuple(sorted(((a, p) for p, a in seen.items()),
                            key=lambda item: item[1]))
    perms = [p for _, p in elements]
    # closure and commutativity of the collected permutations
    pset = set(perms)
    for p in perms:
        for q in perms:
            comp = tuple(p[q[i]] for i in range(r))
            if comp not in pset:
                raise NoMatchingPermutation("composition escapes the group")
            if comp != tuple(q[p[i]] for i in range(r)):
                raise NoMatchingPermutation("non-abelian permutation action")
    for p in perms:
        for k in range(r):
            if data.dual[p[k]] != p[data.dual[k]]:
                raise NoMatchingPermutation("permutation does not commute with dual")
    generators = _minimal_generators(perms, r)
    return GaloisGroup(r=r, elements=elements, generators=generators)


def _minimal_generators(perms, r):
    identity = tuple(range(r))
    target = set(perms)
    chosen = []
    generated = {identity}
    for p in sorted(target):
        if p in generated:
            continue
        chosen.append(p)
        generated = set(_close_under(generated | {p}, r))
        if generated == target:
            break
    return tuple(chosen)


def _close_under(perms, r):
    group = set(perms)
    changed = True
    while changed:
        changed = False
        for p in list(group):
            for q in list(group):
                comp = tuple(p[q[i]] for i in range(r))
                if comp not in group:
                    group.add(comp)
                    changed = True
    return group


def spanned_degree(data: SMCData) -> int:
    """[Q(hatS):Q] as the dimension of the subalgebra the entries generate."""
    field = data.field
    gens = {field.one()}
    for row in data.hatS:
        gens.update(row)
    basis_rows = []
    basis_elems = []

    def _insert(el):
        vec = list(el.coeffs)
        for pivot_col, pivot_row in basis_rows:
            if vec[pivot_col]:
                f = vec[pivot_col] / pivot_row[pivot_col]
                vec = [a - f * b for a, b in zip(vec, pivot_row)]
        for col, v in enumerate(vec):
            if v:
                basis_rows.append((col, vec))
                basis_elems.append(el)
                return True
        return False

    frontier = [el for el in gens if _insert(el)]
    while frontier:
        new_frontier = []
        for el in frontier:
            for other in list(basis_elems):
                prod = el * other
                if _insert(prod):
                    new_frontier.append(prod)
        frontier = new_frontier
    return len(basis_rows)


def check_s_symmetry(data: SMCData, group: GaloisGroup) -> Report:
    """Both Galois symmetries of hatS, with the signs recorded.

    For each automorphism sigma with permutation p the checks are
    (a) hatS[j][k] == +/- hatS[p(j)][p^-1(k)],
    (b) sigma(hatS[j][k]) == +/- hatS[j][p(k)] / d_{p(0)},
    (c) hatS[k][p(0)] == +/- d_{p(k)}  (the sign lemma), and
    (d) hatS[k][p(0)] is fixed by complex conjugation.
    """
    rep = Report(f"{data.name}: Galois S-matrix symmetries")
    r = data.r
    S = data.hatS
    conj = data.field.conjugation
    sign_tables = {}
    for auto_id, p in group.elements:
        pinv = [0] * r
        for i, v in enumerate(p):
            pinv[v] = i
        inv_d_p0 = nf.nf_inverse(data.dims[p[0]])
        signs_a = [[0] * r for _ in range(r)]
        signs_b = [[0] * r for _ in range(r)]
        for j in range(r):
            for k in range(r):
                rep.checked += 2
                lhs = S[j][k]
                rhs = S[p[j]][pinv[k]]
                if lhs == rhs:
                    signs_a[j][k] = 1
                elif lhs == -rhs:
                    signs_a[j][k] = -1
                else:
                    rep.add("hatS[j][k] == +-hatS[sigma(j)][sigma^-1(k)]",
                            (auto_id, j, k), _residual(lhs - rhs))
                img = data.field.apply_auto_id(auto_id, S[j][k])
                scaled = S[j][p[k]] * inv_d_p0
                if img == scaled:
                    signs_b[j][k] = 1
                elif img == -scaled:
                    signs_b[j][k] = -1
                else:
                    rep.add("sigma(hatS[j][k]) == +-hatS[j][sigma(k)]/d_sigma(0)",
                            (auto_id, j, k), _residual(img - scaled))
        for k in range(r):
            rep.checked += 1
            col = S[k][p[0]]
            if col != data.dims[p[k]] and col != -data.dims[p[k]]:
                rep.add("hatS[k][sigma(0)] == +-d_sigma(k)", (auto_id, k),
                        _residual(col))
            if conj is not None:
                rep.checked += 1
                if data.field.apply_auto_id(conj, col) != col:
                    rep.add("hatS[k][sigma(0)] is real", (auto_id, k))
        sign_tables[auto_id] = {"relabel": signs_a, "galois": signs_b}
    rep.notes.append(sign_tables)
    return rep


def stratum_of(group: GaloisGroup) -> Stratum:
    """Canonical class of the permutation group, label 0 distinguished."""
    if group.r != 4:
        raise NotRank4(f"stratum classification needs r == 4, got {group.r}")
    pset = frozenset(group.perms)
    for relab in permutations((1, 2, 3)):
        full = (0,) + relab
        conj = frozenset(
            tuple(full[p[_inverse4(full)[i]]] for i in range(4)) for p in pset
        )
        for stratum, ref in _REFERENCE_GROUPS.items():
            if conj == ref:
                return stratum
    raise ValueError("permutation group is not an abelian subgroup class of S4")


def _inverse4(p):
    inv = [0] * 4
    for i, v in enumerate(p):
        inv[v] = i
    return inv
