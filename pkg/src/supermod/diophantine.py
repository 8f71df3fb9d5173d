"""Exact Pell-type solvers and brute-force verifiers.

Closed forms are converted to two-term integer recurrences once, and the
agreement between the two is itself asserted; every emitted pair satisfies
its defining equation in arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import isqrt

from ._parallel import run_chunked, split_range


def pell_m_beta(count: int) -> list[tuple[int, int]]:
    """Solutions of m^2 - 8 beta^2 = 1 in increasing m, smallest (3, 1).

    Powers of 3 + 2*sqrt(2): both coordinates obey x_{n+1} = 6 x_n - x_{n-1}.
    """
    if count < 1:
        raise ValueError("count must be positive")
    out = []
    m_prev, m_cur = 1, 3
    b_prev, b_cur = 0, 1
    for _ in range(count):
        assert m_cur * m_cur - 8 * b_cur * b_cur == 1
        out.append((m_cur, b_cur))
        m_prev, m_cur = m_cur, 6 * m_cur - m_prev
        b_prev, b_cur = b_cur, 6 * b_cur - b_prev
    return out


def pell_m_beta_closed_form(count: int) -> list[tuple[int, int]]:
    """The same solutions via integer powers of z = 3 + 2*sqrt(2); with
    z^n = p + q*sqrt(2) the pair is (p, q/2)."""
    out = []
    p, q = 3, 2
    for _ in range(count):
        assert q % 2 == 0
        out.append((p, q // 2))
        p, q = 3 * p + 4 * q, 2 * p + 3 * q
    return out


def pell_a_c(count: int) -> list[tuple[int, int]]:
    """Solutions of a^2 - 2 c^2 = 2 with a >= 0, c <= -1, increasing a.

    Odd powers of 1 + sqrt(2) drive the one-step recurrence
    a' = 3a - 4c, c' = 3c - 2a from (2, -1).
    """
    if count < 1:
        raise ValueError("count must be positive")
    out = []
    a, c = 2, -1
    for _ in range(count):
        assert a * a - 2 * c * c == 2
        out.append((a, c))
        a, c = 3 * a - 4 * c, 3 * c - 2 * a
    return out


def pell_a_c_closed_form(count: int) -> list[tuple[int, int]]:
    """Via odd powers (1+sqrt2)^(2i-1) = u + v*sqrt(2): a = 2v, c = -u."""
    out = []
    u, v = 1, 1
    for _ in range(count):
        out.append((2 * v, -u))
        # multiply by (1+sqrt2)^2 = 3 + 2 sqrt2
        u, v = 3 * u + 4 * v, 2 * u + 3 * v
    return out


@dataclass
class Beq0Report:
    bound: int
    zero_b_solutions: list = dc_field(default_factory=list)
    nonzero_b_solutions: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.nonzero_b_solutions

    def to_json(self):
        return {
            "bound": self.bound,
            "zero_b_solutions": [list(map(str, s)) for s in self.zero_b_solutions],
            "nonzero_b_solutions": [list(map(str, s))
                                    for s in self.nonzero_b_solutions],
            "ok": self.ok,
        }


def _beq0_chunk(b_lo, b_hi, bound):
    zero_b = []
    nonzero_b = []
    limit_sq = bound * bound
    for b in range(b_lo, b_hi):
        big = b * b + 2
        c = 1
        while big * c * c + 2 <= limit_sq:
            a_sq = big * c * c + 2
            a = isqrt(a_sq)
            if a * a == a_sq:
                if b == 0:
                    zero_b.append((a, c))
                else:
                    nonzero_b.append((a, b, c))
            c += 1
    return zero_b, nonzero_b


def verify_beq0(bound: int, threads: int = 1) -> Beq0Report:
    """Exhaustive scan of a^2 - (b^2+2) c^2 = 2 over |a|,|b|,|c| <= bound.

    For each |b| the constraint a <= bound caps c at bound/sqrt(b^2+2), so the
    whole box is covered in about bound*log(bound) steps.  Solutions are
    recorded up to the sign symmetries of (a, b, c); c = 0 is impossible since
    2 is not a square.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    chunks = split_range(0, bound + 1, threads * 8 if threads > 1 else 1)
    results = run_chunked(_beq0_chunk, [(lo, hi, bound) for lo, hi in chunks],
                          threads)
    report = Beq0Report(bound=bound)
    for zero_b, nonzero_b in results:
        report.zero_b_solutions.extend(zero_b)
        report.nonzero_b_solutions.extend(nonzero_b)
    report.zero_b_solutions.sort()
    report.nonzero_b_solutions.sort()
    return report


def n0_discriminant_solutions() -> list[int]:
    """All c > 0 with (2c)^2 - 27 a perfect square, by factoring
    (2c - t)(2c + t) = 27."""
    out = set()
    for d1 in range(1, 28):
        if 27 % d1:
            continue
        d2 = 27 // d1
        if d1 > d2:
            continue
        # 2c - t = d1, 2c + t = d2
        if (d1 + d2) % 4 == 0 and (d2 - d1) % 2 == 0:
            out.add((d1 + d2) // 4)
    return sorted(out)


def n1_discriminant_solutions(limit: int) -> list[int]:
    """Ascending c <= limit with 5c^2 - 22c - 27 a perfect square."""
    if limit < 7:
        raise ValueError("limit must be at least 7")
    out = []
    for c in range(1, limit + 1):
        disc = 5 * c * c - 22 * c - 27
        if disc < 0:
            continue
        t = isqrt(disc)
        if t * t == disc:
            out.append(c)
    return out
