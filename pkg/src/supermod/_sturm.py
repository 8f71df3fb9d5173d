"""Sturm-sequence root counting and isolation for rational polynomials."""

from __future__ import annotations

from fractions import Fraction


def _strip(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_rem(a, b):
    a = a[:]
    while len(a) >= len(b) and _strip(a):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        _strip(a)
    return a


def sturm_sequence(coeffs):
    p = _strip([Fraction(c) for c in coeffs])
    if len(p) <= 1:
        return [p]
    dp = [i * c for i, c in enumerate(p)][1:]
    seq = [p, _strip(dp)]
    while seq[-1]:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _variations(seq, x):
    signs = []
    for p in seq:
        v = _poly_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    count = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            count += 1
    return count


def count_real_roots(coeffs, lo, hi):
    """Number of distinct real roots in (lo, hi] (square-free input assumed)."""
    seq = sturm_sequence(coeffs)
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


def isolate_largest_real_root(coeffs):
    """Rational interval (lo, hi] isolating the largest real root."""
    p = [Fraction(c) for c in coeffs]
    bound = 1 + max(abs(c) for c in p[:-1]) / abs(p[-1])
    lo, hi = -bound - 1, bound + 1
    if count_real_roots(p, lo, hi) < 1:
        raise ValueError("polynomial has no real root")
    while count_real_roots(p, lo, hi) != 1:
        mid = (lo + hi) / 2
        if _poly_eval(p, mid) == 0:
            # rational root: shrink around it from the right first
            if count_real_roots(p, mid, hi) >= 1:
                lo = mid
                continue
            return (mid - Fraction(1, 10 ** 9), mid)
        if count_real_roots(p, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return (lo, hi)
