"""Shipped exact realizations: quotient data for every catalogued category,
plus the generators for pointed forms and the PSU(2)_{4m+2} family.

All matrices are hardcoded over explicit cyclotomic towers; product entries
are assembled with the Deligne product and relabeled to their documented
orderings.  The bundled data/ JSON files are byte-stable snapshots of these
builders.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import numberfield as nf
from .fusionsplit import deligne_product
from .galois import Stratum
from .numberfield import (
    cyclotomic_field,
    rational_field,
    root_of_unity_in,
)
from .smc import (
    FusionTensor,
    ModularData,
    SMCData,
    fusion_from_products,
    smc_to_json,
)


class DegenerateForm(Exception):
    """The quadratic form has a transparent element: premodular only."""


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class CatalogueEntry:
    data: SMCData
    provenance: str
    tags: frozenset
    stratum: Stratum | None = None


# -- pointed constructor ----------------------------------------------------------


def pointed_from_form(orders, q_angles, field=None, name=None) -> ModularData:
    """Pointed (pre)modular data from a finite abelian group and a quadratic
    form given as angles: Q(a) = exp(2*pi*i*q_angles[a]).

    S[a][b] = Q(a+b)/(Q(a)Q(b)), theta_a = Q(a); modularity is the
    nondegeneracy of the associated bilinear form and is checked.
    """
    orders = tuple(int(n) for n in orders)
    elements = [()]
    for n in orders:
        elements = [e + (k,) for e in elements for k in range(n)]

    def add(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, orders))

    def neg(x):
        return tuple((-a) % n for a, n in zip(x, orders))

    angles = {e: Fraction(q_angles[e]) % 1 for e in elements}
    for e in elements:
        if angles[e] != angles[neg(e)]:
            raise ValueError(f"form not symmetric at {e}")

    def bilinear(x, y):
        return (angles[add(x, y)] - angles[x] - angles[y]) % 1

    for x in elements:
        for y in elements:
            for z in elements:
                if (bilinear(add(x, y), z) - bilinear(x, z) - bilinear(y, z)) % 1:
                    raise ValueError("form is not quadratic (bilinearity fails)")

    if field is None:
        den = 1
        for e in elements:
            den = den * angles[e].denominator // __import__("math").gcd(
                den, angles[e].denominator)
        field = rational_field() if den <= 2 else cyclotomic_field(den)

    def rou(angle):
        return root_of_unity_in(field, angle.numerator % angle.denominator,
                                angle.denominator)

    rank = len(elements)
    index = {e: i for i, e in enumerate(elements)}
    one = field.one()
    S = [[rou(bilinear(x, y)) for y in elements] for x in elements]
    T = tuple(rou(angles[e]) for e in elements)
    dims = tuple(one for _ in elements)
    fusion = tuple(
        tuple(
            tuple(1 if index[add(x, y)] == k else 0 for k in range(rank))
            for y in elements
        )
        for x in elements
    )
    modular = all(
        any(bilinear(x, y) for y in elements) for x in elements if any(x)
    )
    return ModularData(
        name=name or ("C(" + "x".join(f"Z{n}" for n in orders) + ",Q)"),
        field=field, rank=rank, dims=dims,
        S=tuple(tuple(row) for row in S), T=T, fusion=fusion, modular=modular)


# -- PSU(2)_{4m+2} fusion family ----------------------------------------------------


def psu2_family_fusion(m: int) -> FusionTensor:
    """Full fusion rules of PSU(2)_{4m+2} in the ladder ordering
    [1, X_1, ..., X_{r-1}, fX_{r-1}, ..., fX_1, f] (rank 2r, r = m+1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    r = m + 1
    rank = 2 * r
    cap = 4 * m + 2  # ladder-unit fusion ceiling
    n = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for a in range(rank):
        for b in range(rank):
            lo = abs(a - b)
            hi = min(a + b, cap - a - b)
            for c in range(lo, hi + 1):
                n[a][b][c] = 1
    fperm = tuple(rank - 1 - i for i in range(rank))
    ft = FusionTensor(rank=rank, fperm=fperm,
                      N=tuple(tuple(tuple(row) for row in plane) for plane in n))
    return ft


def _ladder_to_entry(chain: FusionTensor, qmap) -> FusionTensor:
    """Relabel a ladder-ordered tensor to block convention with the given
    quotient ordering (qmap[y] = entry label of ladder label y < r)."""
    r = chain.r
    full = [0] * chain.rank
    for y in range(r):
        full[y] = qmap[y]
        full[chain.fperm[y]] = qmap[y] + r
    return chain.relabel(full)


# -- helper factors -----------------------------------------------------------------


def _svec_in(field) -> SMCData:
    one = field.one()
    fusion = FusionTensor(rank=2, fperm=(1, 0),
                          N=(((1, 0), (0, 1)), ((0, 1), (1, 0))))
    return SMCData(name="svec", field=field, r=1, dims=(one,),
                   hatS=((one,),), hatT=(one,), dual=(0,), fusion=fusion)


def _sem_modular(field) -> ModularData:
    return pointed_from_form([2], {(0,): Fraction(0), (1,): Fraction(1, 4)},
                             field=field, name="sem")


def _fib_modular(field) -> ModularData:
    one = field.one()
    z5 = root_of_unity_in(field, 1, 5)
    z5c = root_of_unity_in(field, 4, 5)
    phi1 = one + z5 + z5c
    fusion = (((1, 0), (0, 1)), ((0, 1), (1, 1)))
    return ModularData(name="fib", field=field, rank=2, dims=(one, phi1),
                       S=((one, phi1), (phi1, -one)),
                       T=(one, root_of_unity_in(field, 2, 5)),
                       fusion=fusion, modular=True)


def _psu27_modular(field) -> ModularData:
    """PSU(2)_7: labels ordered by (unit, d, 1+d, d^2-1), d the largest root
    of x^3 - 3x - 1."""
    one = field.one()
    d = -(root_of_unity_in(field, 4, 9) + root_of_unity_in(field, 5, 9))
    d2 = one + d
    d3 = d * d - one
    S = ((one, d, d2, d3),
         (d, -d2, -one, d3),
         (d2, -one, d, -d3),
         (d3, d3, -d3, field.zero()))
    T = (one, root_of_unity_in(field, 1, 3), root_of_unity_in(field, 2, 3),
         root_of_unity_in(field, 2, 9))
    # ladder rules of the odd-level family, even labels (l = 0, 6, 4, 2)
    lvals = [0, 6, 4, 2]
    rank = 4
    fusion = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    for a in range(rank):
        for b in range(rank):
            la, lb = lvals[a], lvals[b]
            for c in range(rank):
                lc = lvals[c]
                if abs(la - lb) <= lc <= min(la + lb, 14 - la - lb) \
                        and (la + lb + lc) % 2 == 0:
                    fusion[a][b][c] = 1
    return ModularData(name="psu2-7", field=field, rank=rank,
                       dims=(one, d, d2, d3), S=S, T=T,
                       fusion=tuple(tuple(tuple(r) for r in p) for p in fusion),
                       modular=True)


def _psu2_6_in(field) -> SMCData:
    one = field.one()
    sqrt2 = root_of_unity_in(field, 1, 8) + root_of_unity_in(field, 7, 8)
    phi2 = one + sqrt2
    chain = psu2_family_fusion(1)
    fusion = _ladder_to_entry(chain, [0, 1])
    return SMCData(name="psu2-6", field=field, r=2, dims=(one, phi2),
                   hatS=((one, phi2), (phi2, -one)),
                   hatT=(one, root_of_unity_in(field, 1, 4)),
                   dual=(0, 1), fusion=fusion)


def _fib_svec_in(field) -> SMCData:
    data = deligne_product(_fib_modular(field), _svec_in(field))
    return dataclasses.replace(data, name="fib-svec")


# -- entry builders -----------------------------------------------------------------


def _build_svec():
    return CatalogueEntry(
        data=_svec_in(rational_field()),
        provenance="the super-vector-space base case (rank 2, quotient rank 1)",
        tags=frozenset({"rank2", "split", "pointed"}))


def _build_pointed_z2():
    data = deligne_product(_sem_modular(cyclotomic_field(4)),
                           _svec_in(cyclotomic_field(4)))
    return CatalogueEntry(
        data=dataclasses.replace(data, name="pointed-z2"),
        provenance="semion x sVec, the rank-4 pointed base",
        tags=frozenset({"rank4", "split", "pointed"}))


def _build_fib_svec():
    return CatalogueEntry(
        data=_fib_svec_in(cyclotomic_field(5)),
        provenance="Fibonacci x sVec, rank-4 split base",
        tags=frozenset({"rank4", "split"}))


def _build_psu2_6():
    return CatalogueEntry(
        data=_psu2_6_in(cyclotomic_field(8)),
        provenance="PSU(2)_6, the non-split rank-4 base",
        tags=frozenset({"rank4", "prime"}))


def _build_psu2_10():
    field = cyclotomic_field(12)
    one = field.one()
    sqrt3 = field.zeta_powers[1] + field.zeta_powers[11]
    d1 = 2 + sqrt3
    d2 = one + sqrt3
    S = ((one, d1, d2),
         (d1, one, -d2),
         (d2, -d2, d2))
    T = (one, field.from_rational(-1), root_of_unity_in(field, 1, 6))
    fusion = _ladder_to_entry(psu2_family_fusion(2), [0, 2, 1])
    data = SMCData(name="psu2-10", field=field, r=3, dims=(one, d1, d2),
                   hatS=S, hatT=T, dual=(0, 1, 2), fusion=fusion)
    return CatalogueEntry(
        data=data, provenance="PSU(2)_10 (rank 6)",
        tags=frozenset({"rank6", "prime"}))


def _build_psu2_14():
    field = cyclotomic_field(16)
    z = field.zeta_powers
    one = field.one()
    sqrt2 = z[2] + z[14]
    x = z[1] + z[15]            # sqrt(2 + sqrt2)
    sq2x = sqrt2 * x            # sqrt(2 (2 + sqrt2))
    a = one + x
    b = one + sqrt2 + x
    c = one + sqrt2 + sq2x
    S = ((one, a, b, c),
         (a, c, one, -b),
         (b, one, -c, a),
         (c, -b, a, -one))
    T = (one, z[2], z[6], z[12])
    fusion = _ladder_to_entry(psu2_family_fusion(3), [0, 1, 2, 3])
    data = SMCData(name="psu2-14", field=field, r=4, dims=(one, a, b, c),
                   hatS=S, hatT=T, dual=(0, 1, 2, 3), fusion=fusion)
    return CatalogueEntry(
        data=data, provenance="PSU(2)_14 inside SU(2)_14 (prime, rank 8)",
        tags=frozenset({"rank8", "prime"}), stratum=Stratum.Z4)


def _build_so12c():
    field = cyclotomic_field(48)
    z = field.zeta_powers
    one = field.one()
    two = field.from_rational(2)
    sqrt2 = z[6] + z[42]
    sqrt3 = z[4] + z[44]
    sqrt6 = sqrt2 * sqrt3
    S = ((one, one, two, sqrt6),
         (one, one, two, -sqrt6),
         (two, two, -two, field.zero()),
         (sqrt6, -sqrt6, field.zero(), field.zero()))
    T = (one, one, z[16], z[9])  # (1, 1, exp(2 pi i/3), exp(3 pi i/8))
    # gauge consistent with this twist vector: the balancing identity forces
    # X2 x X2 = 1 + X1 + X2 and puts fX1 (not X1) inside X3 x X3
    fperm = (4, 5, 6, 7, 0, 1, 2, 3)
    fusion = fusion_from_products(8, fperm, {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
        (1, 1): {0: 1},
        (1, 2): {2: 1},
        (1, 3): {7: 1},
        (2, 2): {0: 1, 1: 1, 2: 1},
        (2, 3): {3: 1, 7: 1},
        (3, 3): {0: 1, 5: 1, 2: 1, 6: 1},
    })
    data = SMCData(name="so12c", field=field, r=4,
                   dims=(one, one, two, sqrt6), hatS=S, hatT=T,
                   dual=(0, 1, 2, 3), fusion=fusion)
    return CatalogueEntry(
        data=data,
        provenance="centralizer of either fermion in SO(12)_2 (prime, rank 8)",
        tags=frozenset({"rank8", "prime", "weakly-integral"}),
        stratum=Stratum.Z2_01)


def _build_condensed_psu26sq():
    field = cyclotomic_field(8)
    z = field.zeta_powers
    one = field.one()
    sqrt2 = z[1] + z[7]
    b = one + sqrt2
    a = one + 2 * sqrt2 + 2  # 3 + 2 sqrt2
    S = ((one, a, b, b),
         (a, one, -b, -b),
         (b, -b, -one, a),
         (b, -b, a, -one))
    T = (one, field.from_rational(-1), z[2], z[2])
    fperm = (4, 5, 6, 7, 0, 1, 2, 3)
    fusion = fusion_from_products(8, fperm, {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
        (1, 1): {0: 1, 1: 2, 5: 2, 2: 1, 6: 1, 3: 1, 7: 1},
        (1, 2): {1: 1, 5: 1, 3: 1},
        (1, 3): {1: 1, 5: 1, 2: 1},
        (2, 2): {0: 1, 2: 1, 6: 1},
        (2, 3): {1: 1},
        (3, 3): {0: 1, 3: 1, 7: 1},
    })
    data = SMCData(name="condensed-psu26sq", field=field, r=4,
                   dims=(one, a, b, b), hatS=S, hatT=T, dual=(0, 1, 2, 3),
                   fusion=fusion)
    return CatalogueEntry(
        data=data,
        provenance="fermion-pair condensation of PSU(2)_6 x PSU(2)_6 "
                   "(prime, rank 8)",
        tags=frozenset({"rank8", "prime"}), stratum=Stratum.Z2_PAIRFLIP)


def _build_fib_psu26():
    field = cyclotomic_field(40)
    data = deligne_product(_fib_modular(field), _psu2_6_in(field))
    data = data.relabel((0, 3, 2, 1))
    data = dataclasses.replace(data, name="fib-psu26")
    return CatalogueEntry(
        data=data, provenance="Fibonacci x PSU(2)_6 (rank 8, not prime)",
        tags=frozenset({"rank8", "product"}), stratum=Stratum.KLEIN_FREE)


def _build_psu2_7_svec():
    field = cyclotomic_field(9)
    data = deligne_product(_psu27_modular(field), _svec_in(field))
    data = dataclasses.replace(data, name="psu2-7-svec")
    return CatalogueEntry(
        data=data, provenance="PSU(2)_7 x sVec (rank 8, split)",
        tags=frozenset({"rank8", "split"}), stratum=Stratum.Z3_012)


def _build_fib_fib_svec():
    field = cyclotomic_field(5)
    data = deligne_product(_fib_modular(field), _fib_svec_in(field))
    data = data.relabel((0, 3, 2, 1))
    data = dataclasses.replace(data, name="fib-fib-svec")
    return CatalogueEntry(
        data=data, provenance="Fibonacci x Fibonacci x sVec (rank 8, split)",
        tags=frozenset({"rank8", "split"}), stratum=Stratum.Z2_PAIRFLIP)


def _build_sem_fib_svec():
    field = cyclotomic_field(20)
    data = deligne_product(_sem_modular(field), _fib_svec_in(field))
    data = dataclasses.replace(data, name="sem-fib-svec")
    return CatalogueEntry(
        data=data, provenance="semion x Fibonacci x sVec (rank 8, split)",
        tags=frozenset({"rank8", "split"}), stratum=Stratum.Z2_PAIRFLIP)


def _build_sem_psu26():
    field = cyclotomic_field(8)
    data = deligne_product(_sem_modular(field), _psu2_6_in(field))
    data = dataclasses.replace(data, name="sem-psu26")
    return CatalogueEntry(
        data=data, provenance="semion x PSU(2)_6 (rank 8, not prime)",
        tags=frozenset({"rank8", "product"}), stratum=Stratum.Z2_PAIRFLIP)


def _build_toric_svec():
    field = rational_field()
    toric = pointed_from_form(
        [2, 2],
        {(0, 0): Fraction(0), (0, 1): Fraction(0), (1, 0): Fraction(0),
         (1, 1): Fraction(1, 2)},
        field=field, name="toric")
    data = deligne_product(toric, _svec_in(field))
    data = dataclasses.replace(data, name="toric-svec")
    return CatalogueEntry(
        data=data, provenance="toric-code pointed form x sVec (rank 8, split)",
        tags=frozenset({"rank8", "split", "pointed"}), stratum=Stratum.TRIVIAL)


def _build_semsem_svec():
    field = cyclotomic_field(4)
    form = pointed_from_form(
        [2, 2],
        {(0, 0): Fraction(0), (0, 1): Fraction(1, 4), (1, 0): Fraction(1, 2),
         (1, 1): Fraction(1, 4)},
        field=field, name="semsem")
    data = deligne_product(form, _svec_in(field))
    data = dataclasses.replace(data, name="semsem-svec")
    return CatalogueEntry(
        data=data,
        provenance="semion-pair pointed form x sVec (rank 8, split)",
        tags=frozenset({"rank8", "split", "pointed"}), stratum=Stratum.TRIVIAL)


def _build_czq4_svec():
    field = cyclotomic_field(8)
    form = pointed_from_form(
        [4],
        {(0,): Fraction(0), (1,): Fraction(1, 8), (2,): Fraction(1, 2),
         (3,): Fraction(1, 8)},
        field=field, name="czq4")
    data = deligne_product(form, _svec_in(field))
    data = data.relabel((0, 2, 1, 3))
    data = dataclasses.replace(data, name="czq4-svec")
    return CatalogueEntry(
        data=data,
        provenance="faithful quadratic form on Z4, x sVec "
                   "(the non-self-dual rank-8 class)",
        tags=frozenset({"rank8", "split", "pointed", "non-self-dual"}),
        stratum=Stratum.Z2_23)


_BUILDERS = {
    "svec": _build_svec,
    "pointed-z2": _build_pointed_z2,
    "fib-svec": _build_fib_svec,
    "psu2-6": _build_psu2_6,
    "psu2-10": _build_psu2_10,
    "psu2-14": _build_psu2_14,
    "so12c": _build_so12c,
    "condensed-psu26sq": _build_condensed_psu26sq,
    "fib-psu26": _build_fib_psu26,
    "psu2-7-svec": _build_psu2_7_svec,
    "fib-fib-svec": _build_fib_fib_svec,
    "sem-fib-svec": _build_sem_fib_svec,
    "sem-psu26": _build_sem_psu26,
    "toric-svec": _build_toric_svec,
    "semsem-svec": _build_semsem_svec,
    "czq4-svec": _build_czq4_svec,
}

_CACHE = {}


def entry_names():
    return sorted(_BUILDERS)


def load_entry(name: str) -> CatalogueEntry:
    if name not in _BUILDERS:
        raise UnknownEntry(name)
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


def list_entries(filter_spec: str | None = None):
    """Names whose tag set matches every comma-separated token."""
    tokens = []
    if filter_spec:
        tokens = [t.strip().lower().replace(" ", "") for t in
                  filter_spec.split(",") if t.strip()]
    out = []
    for name in entry_names():
        entry = load_entry(name)
        tags = {t.lower() for t in entry.tags}
        if entry.stratum is not None:
            tags.add(entry.stratum.alias.lower())
            tags.add(entry.stratum.table_label.lower())
        if all(tok in tags for tok in tokens):
            out.append(name)
    return out


def entry_json(name: str) -> dict:
    return smc_to_json(load_entry(name).data)


def data_file_text(name: str) -> str:
    res = resources.files("supermod").joinpath(f"data/{name}.json")
    return res.read_text()


def write_data_files(dirpath) -> list[str]:
    """Regenerate the bundled snapshots (used by the packaging workflow)."""
    import pathlib

    out = []
    base = pathlib.Path(dirpath)
    base.mkdir(parents=True, exist_ok=True)
    for name in entry_names():
        text = nf.dumps_canonical(entry_json(name))
        (base / f"{name}.json").write_text(text + "\n")
        out.append(name)
    return out
