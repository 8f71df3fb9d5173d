"""Exact arithmetic in explicitly presented algebraic number fields.

A field is *declared*, never discovered: a tower of monogenic extensions,
each generator carrying its minimal polynomial over the sub-tower, an
isolating box for the chosen root, and a table of automorphisms given by
generator images.  Elements are exact rational coefficient vectors over the
flattened power basis.  Sign determination is rigorous: exact-zero detection
in normal form, then dyadic interval refinement of the generator enclosures
(series enclosures for declared roots of unity, bisection against the
minimal polynomial for real generators).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import _sturm
from ._interval import CIv, Iv, root_of_unity_civ

_MAX_SIGN_PREC = 1 << 14
THETA_ORDER_CAP = 10_000


class FieldError(Exception):
    """Base error for number-field operations."""


class FieldMismatchError(FieldError):
    """Operands belong to different field descriptors."""


class UnknownAutomorphismError(FieldError):
    """Automorphism id not declared in the field descriptor."""


class NotRealError(FieldError):
    """Sign requested for an element with no certified real value."""


@dataclass(frozen=True)
class GeneratorSpec:
    """One tower step: minimal polynomial over the sub-tower plus root box.

    ``minpoly`` lists coefficients constant-first; each coefficient is a
    flattened coefficient vector over the sub-tower basis.  ``root_of_unity``
    tags the root as exp(2*pi*i*p/q), enabling series refinement.
    """

    minpoly: tuple[tuple[Fraction, ...], ...]
    box: tuple[Fraction, Fraction, Fraction, Fraction]  # re_lo, re_hi, im_lo, im_hi
    root_of_unity: tuple[int, int] | None = None

    @property
    def degree(self):
        return len(self.minpoly) - 1

    @property
    def is_real(self):
        return self.box[2] == 0 == self.box[3]


def _normalize(nums, den):
    if den < 0:
        nums = [-v for v in nums]
        den = -den
    g = den
    for v in nums:
        if v:
            g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    return tuple(nums), den


class NFElement:
    """Immutable field element: integer vector over a common denominator in
    the flattened power basis."""

    __slots__ = ("field", "nums", "den")

    def __init__(self, field, nums, den=1, _normalized=False):
        if not _normalized:
            nums, den = _normalize(list(nums), den)
        else:
            nums = tuple(nums)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args):
        raise AttributeError("NFElement is immutable")

    @property
    def coeffs(self):
        return tuple(Fraction(v, self.den) for v in self.nums)

    def is_zero(self):
        return not any(self.nums)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, NFElement):
            return NotImplemented
        return (
            self.field.same_field(other.field)
            and self.nums == other.nums
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.nums, self.den))

    def __repr__(self):
        return f"NFElement({self.field.name}, {[str(c) for c in self.coeffs]})"

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        if not isinstance(other, NFElement):
            return None
        if not self.field.same_field(other.field):
            raise FieldMismatchError(
                f"elements of {self.field.name} and {other.field.name}"
            )
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return nf_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-v for v in self.nums), self.den,
                         _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return nf_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return nf_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return nf_mul(self, nf_inverse(other))

    def __rtruediv__(self, other):
        return self.field.from_rational(other) / self

    def __pow__(self, e):
        if e < 0:
            return nf_inverse(self) ** (-e)
        acc = self.field.one()
        base = self
        while e:
            if e & 1:
                acc = nf_mul(acc, base)
            base = nf_mul(base, base)
            e >>= 1
        return acc

    def approx(self):
        """Non-normative complex float approximation (not the trusted path)."""
        return self.field.approx_element(self)


class FieldDescriptor:
    """A declared algebraic number field with automorphism tables."""

    def __init__(self, name, generators, automorphisms=None, conjugation=None,
                 audit=True):
        self.name = name
        self.generators = tuple(generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self.degree = 1
        for d in self.degrees:
            self.degree *= d
        self._exponents = self._basis_exponents()
        self._mul_table = self._build_mul_table()
        self._auto_matrices = {}
        self.conjugation = conjugation
        self._gen_enclosure_cache = {}
        self._mono_cache = {}
        self._signature = tuple(
            (g.minpoly, g.root_of_unity) for g in self.generators
        )
        if automorphisms:
            for auto_id, images in automorphisms.items():
                self._add_automorphism(auto_id, images)
        if "id" not in self._auto_matrices:
            self._add_automorphism(
                "id", [self.generator(i).coeffs for i in range(len(self.generators))]
            )
        self.automorphism_ids = tuple(self._auto_matrices)
        if conjugation is not None and conjugation not in self._auto_matrices:
            raise UnknownAutomorphismError(conjugation)
        if audit:
            self._audit()

    def __repr__(self):
        return f"FieldDescriptor({self.name}, degree={self.degree})"

    # -- construction ----------------------------------------------------------

    def _basis_exponents(self):
        n_gens = len(self.degrees)
        out = []
        for idx in range(self.degree):
            e = []
            rem = idx
            for d in self.degrees:
                e.append(rem % d)
                rem //= d
            out.append(tuple(e))
        assert n_gens == 0 or len(out) == self.degree
        return tuple(out)

    def _index_of_exponents(self, e):
        idx = 0
        for gi in reversed(range(len(self.degrees))):
            idx = idx * self.degrees[gi] + e[gi]
        return idx

    def _build_mul_table(self):
        """Structure constants basis_i * basis_j as sparse integer rows."""
        n = self.degree
        levels = len(self.degrees)
        minpolys = [self._nested_minpoly(i) for i in range(levels)]
        monos = [self._nested_monomial(self._exponents[i]) for i in range(n)]
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                prod = _tw_mul(monos[i], monos[j], levels, minpolys, self.degrees)
                vec = _tw_flatten(prod, levels, self.degrees)
                den = 1
                for q in vec:
                    den = den * q.denominator // gcd(den, q.denominator)
                row = tuple((k, int(q * den)) for k, q in enumerate(vec) if q)
                table[i][j] = (den, row)
                table[j][i] = (den, row)
        return table

    def _nested_minpoly(self, gi):
        return [
            _tw_unflatten([Fraction(c) for c in vec], gi, self.degrees)
            for vec in self.generators[gi].minpoly
        ]

    def _nested_monomial(self, exponents):
        elem = Fraction(1)
        for gi, e in enumerate(exponents):
            poly = [_tw_make_zero(gi, self.degrees) for _ in range(e)] + [elem]
            while len(poly) < self.degrees[gi]:
                poly.append(_tw_make_zero(gi, self.degrees))
            elem = poly
        return elem

    def _audit(self):
        for gi, gen in enumerate(self.generators):
            lead = gen.minpoly[-1]
            if lead[0] != 1 or any(c != 0 for c in lead[1:]):
                raise FieldError(f"{self.name}: generator {gi} minpoly not monic")
            if gen.degree < 1:
                raise FieldError(f"{self.name}: trivial generator")
            self._check_box(gi)
        for auto_id in self.automorphism_ids:
            self._check_automorphism(auto_id)
        self._check_closure()

    def _check_box(self, gi):
        gen = self.generators[gi]
        if gen.root_of_unity is not None:
            p, q = gen.root_of_unity
            enc = root_of_unity_civ(p, q, 24)
            re_lo, re_hi, im_lo, im_hi = gen.box
            if not (re_lo <= enc.re.hi and enc.re.lo <= re_hi
                    and im_lo <= enc.im.hi and enc.im.lo <= im_hi):
                raise FieldError(
                    f"{self.name}: box of generator {gi} misses its root")
            return
        if gen.is_real:
            lo, hi = gen.box[0], gen.box[1]
            s_lo = self._minpoly_sign_at(gi, lo)
            s_hi = self._minpoly_sign_at(gi, hi)
            if s_lo * s_hi >= 0:
                raise FieldError(
                    f"{self.name}: no sign change across the box of generator {gi}"
                )

    def _check_automorphism(self, auto_id):
        sigma_imgs = [self.apply_auto_id(auto_id, self.generator(i))
                      for i in range(len(self.generators))]
        for gi, gen in enumerate(self.generators):
            acc = self.zero()
            power = self.one()
            for c in gen.minpoly:
                coeff = self.apply_auto_id(auto_id, self._embed_subtower(c, gi))
                acc = acc + coeff * power
                power = power * sigma_imgs[gi]
            if not acc.is_zero():
                raise FieldError(
                    f"{self.name}: automorphism {auto_id} does not annihilate "
                    f"minimal polynomial of generator {gi}"
                )

    def _check_closure(self):
        keys = {self._matrix_key(self._auto_matrices[a]): a
                for a in self.automorphism_ids}
        for a in self.automorphism_ids:
            for b in self.automorphism_ids:
                comp = self._compose(self._auto_matrices[a], self._auto_matrices[b])
                if self._matrix_key(comp) not in keys:
                    raise FieldError(
                        f"{self.name}: automorphisms not closed ({a} after {b})"
                    )

    @staticmethod
    def _matrix_key(mat):
        den, rows = mat
        return (den, tuple(tuple(r) for r in rows))

    @staticmethod
    def _normalize_matrix(den, rows):
        g = den
        for r in rows:
            for v in r:
                if v:
                    g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            rows = [[v // g for v in r] for r in rows]
            den //= g
        return (den, rows)

    @classmethod
    def _compose(cls, ma, mb):
        den_a, rows_a = ma
        den_b, rows_b = mb
        n = len(rows_a)
        rows = [[sum(rows_a[i][k] * rows_b[k][j] for k in range(n))
                 for j in range(n)] for i in range(n)]
        return cls._normalize_matrix(den_a * den_b, rows)

    def _add_automorphism(self, auto_id, images):
        imgs = [self.from_coeffs(vec) for vec in images]
        n = self.degree
        cols = []
        for idx in range(n):
            acc = self.one()
            for gi, exp in enumerate(self._exponents[idx]):
                for _ in range(exp):
                    acc = acc * imgs[gi]
            cols.append(acc)
        den = 1
        for c in cols:
            den = den * c.den // gcd(den, c.den)
        rows = [[cols[j].nums[i] * (den // cols[j].den) for j in range(n)]
                for i in range(n)]
        self._auto_matrices[auto_id] = self._normalize_matrix(den, rows)

    # -- element constructors ----------------------------------------------------

    def same_field(self, other):
        return self is other or (
            isinstance(other, FieldDescriptor) and self._signature == other._signature
        )

    def zero(self):
        return NFElement(self, (0,) * self.degree, 1, _normalized=True)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q):
        q = Fraction(q)
        nums = [0] * self.degree
        nums[0] = q.numerator
        return NFElement(self, nums, q.denominator)

    def from_coeffs(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != self.degree:
            raise FieldError(
                f"{self.name}: expected {self.degree} coefficients, got {len(coeffs)}"
            )
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return NFElement(self, [int(c * den) for c in coeffs], den)

    def generator(self, gi=0):
        nums = [0] * self.degree
        e = [0] * len(self.degrees)
        e[gi] = 1
        nums[self._index_of_exponents(e)] = 1
        return NFElement(self, nums, 1, _normalized=True)

    def _embed_subtower(self, coeff_vec, gi):
        sub = 1
        for d in self.degrees[:gi]:
            sub *= d
        if len(coeff_vec) != sub:
            raise FieldError("sub-tower coefficient vector of wrong length")
        coeffs = [Fraction(0)] * self.degree
        for i, c in enumerate(coeff_vec):
            coeffs[i] = Fraction(c)
        return self.from_coeffs(coeffs)

    @property
    def is_totally_real(self):
        return all(g.is_real for g in self.generators)

    def random_element(self, rng, height=9, nonzero=False):
        while True:
            coeffs = [Fraction(rng.randint(-height, height), rng.randint(1, 4))
                      for _ in range(self.degree)]
            el = self.from_coeffs(coeffs)
            if not nonzero or not el.is_zero():
                return el

    # -- automorphisms -------------------------------------------------------------

    def apply_auto_id(self, auto_id, a):
        if auto_id not in self._auto_matrices:
            raise UnknownAutomorphismError(auto_id)
        den_m, rows = self._auto_matrices[auto_id]
        nums = [
            sum(row[j] * a.nums[j] for j in range(self.degree) if a.nums[j])
            for row in rows
        ]
        return NFElement(self, nums, a.den * den_m)

    # -- enclosures ------------------------------------------------------------------

    def _minpoly_sign_at(self, gi, point):
        """Sign of generator gi's minimal polynomial at a rational point.

        Coefficients are enclosed via the sub-tower; the precision rises until
        the sign is definite.  Irreducibility over the tower (degree >= 2)
        rules out a rational root, so the loop terminates.
        """
        point = Fraction(point)
        prec = 32
        while True:
            acc = Iv(Fraction(0))
            power = Fraction(1)
            for c in self.generators[gi].minpoly:
                c_enc = self._subvector_enclosure(c, gi, prec)
                acc = acc + c_enc.re * power
                power = power * point
            s = acc.sign()
            if s is not None:
                return s
            prec *= 2
            if prec > _MAX_SIGN_PREC:
                raise FieldError(
                    f"{self.name}: cannot decide minimal-polynomial sign at {point}"
                )

    def _subvector_enclosure(self, coeff_vec, gi, prec):
        acc = CIv(Iv(Fraction(0)))
        for idx, c in enumerate(coeff_vec):
            if c == 0:
                continue
            mono = self._monomial_enclosure(self._exponents[idx], prec)
            acc = acc + mono.scale(Fraction(c))
        return acc

    def _gen_enclosure(self, gi, prec):
        key = (gi, prec)
        cached = self._gen_enclosure_cache.get(key)
        if cached is not None:
            return cached
        gen = self.generators[gi]
        if gen.root_of_unity is not None:
            enc = root_of_unity_civ(gen.root_of_unity[0], gen.root_of_unity[1], prec)
        elif gen.is_real:
            enc = CIv(self._refine_real_gen(gi, prec), Iv(Fraction(0)))
        else:
            raise FieldError(
                f"{self.name}: generator {gi} is complex without a declared "
                "root-of-unity refinement rule"
            )
        self._gen_enclosure_cache[key] = enc
        return enc

    def _refine_real_gen(self, gi, prec):
        gen = self.generators[gi]
        lo, hi = gen.box[0], gen.box[1]
        s_hi = self._minpoly_sign_at(gi, hi)
        target = Fraction(1, 1 << prec)
        while hi - lo > target:
            mid = (lo + hi) / 2
            if self._minpoly_sign_at(gi, mid) == s_hi:
                hi = mid
            else:
                lo = mid
        return Iv(lo, hi)

    def _monomial_enclosure(self, exponents, prec):
        key = (exponents, prec)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        acc = CIv(Iv(Fraction(1)))
        for gi, e in enumerate(exponents):
            if not e:
                continue
            g_enc = self._gen_enclosure(gi, prec)
            for _ in range(e):
                acc = acc * g_enc
            acc = acc.dyadic(prec + 8)
        self._mono_cache[key] = acc
        return acc

    def element_enclosure(self, a, prec):
        acc = CIv(Iv(Fraction(0)))
        for idx, v in enumerate(a.nums):
            if not v:
                continue
            mono = self._monomial_enclosure(self._exponents[idx], prec)
            acc = acc + mono.scale(Fraction(v, a.den))
        return acc

    def approx_element(self, a):
        enc = self.element_enclosure(a, 48)
        return complex((enc.re.lo + enc.re.hi) / 2, (enc.im.lo + enc.im.hi) / 2)


# -- nested tower arithmetic (construction-time only) ------------------------------


def _tw_make_zero(level, degrees):
    if level == 0:
        return Fraction(0)
    return [_tw_make_zero(level - 1, degrees) for _ in range(degrees[level - 1])]


def _tw_is_zero(a, level):
    if level == 0:
        return a == 0
    return all(_tw_is_zero(c, level - 1) for c in a)


def _tw_add(a, b, level):
    if level == 0:
        return a + b
    return [_tw_add(x, y, level - 1) for x, y in zip(a, b)]


def _tw_neg(a, level):
    if level == 0:
        return -a
    return [_tw_neg(c, level - 1) for c in a]


def _tw_mul(a, b, level, minpolys, degrees):
    if level == 0:
        return a * b
    da, db = len(a), len(b)
    prod = [None] * (da + db - 1)
    for i, x in enumerate(a):
        if _tw_is_zero(x, level - 1):
            continue
        for j, y in enumerate(b):
            if _tw_is_zero(y, level - 1):
                continue
            term = _tw_mul(x, y, level - 1, minpolys, degrees)
            prod[i + j] = term if prod[i + j] is None else _tw_add(
                prod[i + j], term, level - 1)
    for k in range(len(prod)):
        if prod[k] is None:
            prod[k] = _tw_make_zero(level - 1, degrees)
    minpoly = minpolys[level - 1]
    deg = len(minpoly) - 1
    for k in range(len(prod) - 1, deg - 1, -1):
        head = prod[k]
        if _tw_is_zero(head, level - 1):
            continue
        for m in range(deg):
            term = _tw_mul(head, _tw_neg(minpoly[m], level - 1), level - 1,
                           minpolys, degrees)
            prod[k - deg + m] = _tw_add(prod[k - deg + m], term, level - 1)
    return prod[:deg]


def _tw_flatten(a, level, degrees):
    if level == 0:
        return [a]
    out = []
    for c in a:
        out.extend(_tw_flatten(c, level - 1, degrees))
    return out


def _tw_unflatten(vec, level, degrees):
    if level == 0:
        return vec[0]
    size = 1
    for d in degrees[:level - 1]:
        size *= d
    return [_tw_unflatten(vec[i * size:(i + 1) * size], level - 1, degrees)
            for i in range(degrees[level - 1])]


# -- operations ---------------------------------------------------------------------


def nf_add(a: NFElement, b: NFElement) -> NFElement:
    if not a.field.same_field(b.field):
        raise FieldMismatchError(f"{a.field.name} vs {b.field.name}")
    da, db = a.den, b.den
    g = gcd(da, db)
    ma, mb = db // g, da // g
    nums = [x * ma + y * mb for x, y in zip(a.nums, b.nums)]
    return NFElement(a.field, nums, da * ma)


def nf_mul(a: NFElement, b: NFElement) -> NFElement:
    if not a.field.same_field(b.field):
        raise FieldMismatchError(f"{a.field.name} vs {b.field.name}")
    field = a.field
    n = field.degree
    table = field._mul_table
    dens = {}
    for i, ai in enumerate(a.nums):
        if not ai:
            continue
        row_i = table[i]
        for j, bj in enumerate(b.nums):
            if not bj:
                continue
            w = ai * bj
            den_t, row = row_i[j]
            bucket = dens.get(den_t)
            if bucket is None:
                bucket = dens[den_t] = [0] * n
            for k, t in row:
                bucket[k] += w * t
    if not dens:
        return field.zero()
    lcm_t = 1
    for dt in dens:
        lcm_t = lcm_t * dt // gcd(lcm_t, dt)
    acc = [0] * n
    for dt, bucket in dens.items():
        scale = lcm_t // dt
        for k in range(n):
            if bucket[k]:
                acc[k] += bucket[k] * scale
    return NFElement(field, acc, a.den * b.den * lcm_t)


def nf_inverse(a: NFElement) -> NFElement:
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero field element")
    field = a.field
    n = field.degree
    cols = []
    for j in range(n):
        basis_j = NFElement(field, tuple(1 if k == j else 0 for k in range(n)), 1,
                            _normalized=True)
        cols.append(nf_mul(a, basis_j))
    mat = [[cols[j].coeffs[i] for j in range(n)] for i in range(n)]
    rhs = [Fraction(1) if i == 0 else Fraction(0) for i in range(n)]
    sol = _solve_linear(mat, rhs)
    if sol is None:
        raise FieldError(f"{field.name}: non-invertible element (bad field data)")
    return field.from_coeffs(sol)


def _solve_linear(mat, rhs):
    n = len(mat)
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def nf_sign(a: NFElement) -> int:
    """Sign of the declared real embedding, by interval refinement."""
    if a.is_zero():
        return 0
    field = a.field
    if not field.is_totally_real:
        if field.conjugation is None:
            raise NotRealError(
                f"{field.name}: no conjugation declared, cannot certify realness"
            )
        if field.apply_auto_id(field.conjugation, a) != a:
            raise NotRealError("element is not fixed by complex conjugation")
    prec = 32
    while prec <= _MAX_SIGN_PREC:
        s = field.element_enclosure(a, prec).re.sign()
        if s is not None:
            return s
        prec *= 2
    raise FieldError("sign refinement exhausted")


def apply_automorphism(sigma: str, a: NFElement) -> NFElement:
    return a.field.apply_auto_id(sigma, a)


def is_rational(a: NFElement):
    """The exact rational value when all non-constant coefficients vanish."""
    if any(a.nums[1:]):
        return None
    return Fraction(a.nums[0], a.den)


def multiplicative_order(a: NFElement, cap=THETA_ORDER_CAP):
    """Least n >= 1 with a**n == 1, or None past the cap."""
    acc = a
    one = a.field.one()
    for n in range(1, cap + 1):
        if acc == one:
            return n
        acc = nf_mul(acc, a)
    return None


# -- shipped field constructors -------------------------------------------------------

_FIELD_CACHE: dict = {}


def rational_field() -> FieldDescriptor:
    """Q as the empty tower (degree 1)."""
    if "Q" not in _FIELD_CACHE:
        _FIELD_CACHE["Q"] = FieldDescriptor("Q", [], automorphisms=None,
                                            conjugation="id")
    return _FIELD_CACHE["Q"]


def cyclotomic_polynomial(n: int) -> list[int]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return poly


def _poly_div_exact(num, den):
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % den[-1]:
            raise ValueError("non-exact polynomial division")
        q = c // den[-1]
        out[k] = q
        for m, dm in enumerate(den):
            num[k + m] -= q * dm
    if any(num):
        raise ValueError("non-exact polynomial division")
    return out


def cyclotomic_field(n: int) -> FieldDescriptor:
    """Q(zeta_n) for n >= 3, with all automorphisms zeta -> zeta^k declared."""
    key = ("cyc", n)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    if n < 3:
        raise ValueError("use rational_field() for n < 3")
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    # power map zeta^e reduced mod Phi_n, for e in [0, n)
    reduction = [Fraction(-c) for c in phi[:-1]]
    powers = [[Fraction(0)] * deg for _ in range(n)]
    powers[0][0] = Fraction(1)
    for e in range(1, n):
        shifted = [Fraction(0)] + powers[e - 1][:]
        if len(shifted) > deg:
            head = shifted.pop()
            if head:
                shifted = [c + head * r for c, r in zip(shifted, reduction)]
        powers[e] = shifted
    enc = root_of_unity_civ(1, n, 16)
    gen = GeneratorSpec(
        minpoly=tuple((Fraction(c),) for c in phi),
        box=(enc.re.lo, enc.re.hi, enc.im.lo, enc.im.hi),
        root_of_unity=(1, n),
    )
    autos = {}
    for k in range(1, n):
        if gcd(k, n) != 1:
            continue
        autos["id" if k == 1 else f"z{k}"] = [tuple(powers[k])]
    field = FieldDescriptor(f"Q(zeta{n})", [gen], automorphisms=autos,
                            conjugation=f"z{n - 1}")
    field.zeta_powers = [field.from_coeffs(p) for p in powers]
    field.cyclotomic_order = n
    _FIELD_CACHE[key] = field
    return field


def root_of_unity_in(field: FieldDescriptor, p: int, q: int) -> NFElement:
    """exp(2*pi*i*p/q) inside a cyclotomic field whose order q divides."""
    p %= q
    if p == 0:
        return field.one()
    if 2 * p == q:
        return field.from_rational(-1)
    n = getattr(field, "cyclotomic_order", None)
    if n is None:
        raise FieldError(f"{field.name}: {q}-th roots of unity not available")
    if n % q:
        raise FieldError(f"{field.name}: {q}-th roots of unity not present")
    return field.zeta_powers[(p * (n // q)) % n]


def square_free_decomposition(n: int) -> tuple[int, int]:
    """n = k^2 * p with p square-free; returns (k, p)."""
    if n <= 0:
        raise ValueError("positive integers only")
    k, p = 1, 1
    m = n
    d = 2
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        k *= d ** (e // 2)
        if e % 2:
            p *= d
        d += 1
    return k, p * m


def quadratic_field(p: int) -> FieldDescriptor:
    """Q(sqrt(p)) for square-free p > 1, positive root chosen."""
    key = ("quad", p)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    r = isqrt(p)
    gen = GeneratorSpec(
        minpoly=((Fraction(-p),), (Fraction(0),), (Fraction(1),)),
        box=(Fraction(r), Fraction(r + 1), Fraction(0), Fraction(0)),
    )
    autos = {"id": [(Fraction(0), Fraction(1))],
             "flip0": [(Fraction(0), Fraction(-1))]}
    field = FieldDescriptor(f"Q(sqrt{p})", [gen], automorphisms=autos,
                            conjugation="id")
    _FIELD_CACHE[key] = field
    return field


def multi_quadratic_field(ps) -> FieldDescriptor:
    """Q(sqrt(p1), ..., sqrt(pk)) for multiplicatively independent square-free
    p_i > 1.  Irreducibility of each step is trusted-with-audit."""
    ps = tuple(ps)
    key = ("mquad", ps)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    gens = []
    sub = 1
    for p in ps:
        r = isqrt(p)
        const = tuple([Fraction(-p)] + [Fraction(0)] * (sub - 1))
        zero = (Fraction(0),) * sub
        one = tuple([Fraction(1)] + [Fraction(0)] * (sub - 1))
        gens.append(GeneratorSpec(minpoly=(const, zero, one),
                                  box=(Fraction(r), Fraction(r + 1),
                                       Fraction(0), Fraction(0))))
        sub *= 2
    n = 2 ** len(ps)
    autos = {}
    for mask in range(2 ** len(ps)):
        name = "id" if mask == 0 else "flip" + "".join(
            str(i) for i in range(len(ps)) if mask >> i & 1)
        images = []
        for gi in range(len(ps)):
            vec = [Fraction(0)] * n
            vec[2 ** gi] = Fraction(-1) if mask >> gi & 1 else Fraction(1)
            images.append(tuple(vec))
        autos[name] = images
    field = FieldDescriptor("Q(" + ",".join(f"sqrt{p}" for p in ps) + ")",
                            gens, automorphisms=autos, conjugation="id")
    _FIELD_CACHE[key] = field
    return field


def real_root_field(name, int_minpoly, lo=None, hi=None,
                    automorphisms=None) -> FieldDescriptor:
    """Q[x]/(p) for a monic integer polynomial with one isolated real root.

    Defaults to the largest real root; the isolating interval is certified
    by a Sturm count before construction.
    """
    if lo is None or hi is None:
        lo, hi = _sturm.isolate_largest_real_root(int_minpoly)
    count = _sturm.count_real_roots(int_minpoly, Fraction(lo), Fraction(hi))
    if count != 1:
        raise FieldError(f"{name}: interval isolates {count} roots, need exactly 1")
    gen = GeneratorSpec(
        minpoly=tuple((Fraction(c),) for c in int_minpoly),
        box=(Fraction(lo), Fraction(hi), Fraction(0), Fraction(0)),
    )
    return FieldDescriptor(name, [gen], automorphisms=automorphisms,
                           conjugation="id")


def make_phi(n: int) -> NFElement:
    """Positive real root of x^2 - n*x - 1 (metallic ratio phi_n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    k, p = square_free_decomposition(n * n + 4)
    if p == 1:
        return rational_field().from_rational(Fraction(n + k, 2))
    field = quadratic_field(p)
    return field.from_coeffs((Fraction(n, 2), Fraction(k, 2)))


def phi_in(field: FieldDescriptor, n: int, sqrt_disc: NFElement) -> NFElement:
    """(n + sqrt(n^2+4)) / 2 given a positive square root of n^2+4."""
    if (sqrt_disc * sqrt_disc) != field.from_rational(n * n + 4):
        raise FieldError("provided element does not square to n^2 + 4")
    if nf_sign(sqrt_disc) <= 0:
        raise FieldError("need the positive square root")
    return (field.from_rational(n) + sqrt_disc) * Fraction(1, 2)


# -- JSON (field schema v1) ------------------------------------------------------------


def frac_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else (
        f"{q.numerator}/{q.denominator}")


def parse_frac(s) -> Fraction:
    if isinstance(s, (str, int)):
        return Fraction(s)
    raise ValueError(f"expected rational string, got {s!r}")


def _parse_coeff_vec(c, expected_len):
    if isinstance(c, (str, int)):
        vec = [parse_frac(c)]
    else:
        vec = [parse_frac(x) for x in c]
    if len(vec) < expected_len:
        vec += [Fraction(0)] * (expected_len - len(vec))
    if len(vec) != expected_len:
        raise ValueError("coefficient vector too long for its sub-tower")
    return tuple(vec)


def field_to_json(field: FieldDescriptor) -> dict:
    gens = []
    for g in field.generators:
        entry = {
            "minpoly": [[frac_str(c) for c in vec] for vec in g.minpoly],
            "box": {
                "re": [frac_str(g.box[0]), frac_str(g.box[1])],
                "im": [frac_str(g.box[2]), frac_str(g.box[3])],
            },
        }
        if g.root_of_unity is not None:
            entry["root_of_unity"] = list(g.root_of_unity)
        gens.append(entry)
    autos = []
    for auto_id in field.automorphism_ids:
        images = []
        for gi in range(len(field.generators)):
            img = field.apply_auto_id(auto_id, field.generator(gi))
            images.append([frac_str(c) for c in img.coeffs])
        autos.append({"name": auto_id, "images": images})
    out = {"name": field.name, "generators": gens, "automorphisms": autos}
    if field.conjugation is not None:
        out["conjugation"] = field.conjugation
    return out


def field_from_json(doc: dict) -> FieldDescriptor:
    gens = []
    sub = 1
    for g in doc["generators"]:
        minpoly = tuple(_parse_coeff_vec(c, sub) for c in g["minpoly"])
        box = (
            parse_frac(g["box"]["re"][0]), parse_frac(g["box"]["re"][1]),
            parse_frac(g["box"]["im"][0]), parse_frac(g["box"]["im"][1]),
        )
        rou = tuple(g["root_of_unity"]) if "root_of_unity" in g else None
        spec = GeneratorSpec(minpoly=minpoly, box=box, root_of_unity=rou)
        gens.append(spec)
        sub *= spec.degree
    autos = {}
    for a in doc.get("automorphisms", []):
        autos[a["name"]] = [_parse_coeff_vec(img, sub) for img in a["images"]]
    return FieldDescriptor(doc.get("name", "field"), gens,
                           automorphisms=autos or None,
                           conjugation=doc.get("conjugation"))


def element_to_json(a: NFElement) -> list[str]:
    return [frac_str(c) for c in a.coeffs]


def element_from_json(field: FieldDescriptor, vec) -> NFElement:
    if isinstance(vec, (str, int)):
        vec = [vec]
    coeffs = [parse_frac(v) for v in vec]
    if len(coeffs) < field.degree:
        coeffs += [Fraction(0)] * (field.degree - len(coeffs))
    return field.from_coeffs(coeffs)


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
