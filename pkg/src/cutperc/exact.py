"""Exact comparison of products of rational powers.

Products like prod b_i ** e_i with rational exponents are compared without
materializing huge powers: all integers involved are split over a pairwise
coprime basis, which decides equality exactly, and the sign of the log-sum
is then certified with interval arithmetic at increasing precision.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Sequence, Tuple

import mpmath

Term = Tuple[Fraction, Fraction]


def coprime_basis(numbers: Iterable[int]) -> List[int]:
    basis: List[int] = []
    for n in numbers:
        if n <= 1:
            continue
        todo = [n]
        while todo:
            a = todo.pop()
            if a == 1:
                continue
            for k, b in enumerate(basis):
                g = gcd(a, b)
                if g > 1:
                    basis.pop(k)
                    todo.extend([g, a // g, b // g])
                    break
            else:
                basis.append(a)
    return sorted(basis)


def _valuations(n: int, basis: Sequence[int]) -> Dict[int, int]:
    out = {}
    for p in basis:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out[p] = e
    if n != 1:
        raise ArithmeticError("basis does not cover the integer")
    return out


def compare_products(lhs: Sequence[Term], rhs: Sequence[Term]) -> int:
    """Sign of prod(lhs) - prod(rhs) for non-negative bases and non-negative exponents."""
    lhs = [(Fraction(b), Fraction(e)) for b, e in lhs if e != 0]
    rhs = [(Fraction(b), Fraction(e)) for b, e in rhs if e != 0]
    for b, e in lhs + rhs:
        if b < 0 or e < 0:
            raise ValueError("bases and exponents must be non-negative")
    lz = any(b == 0 for b, _ in lhs)
    rz = any(b == 0 for b, _ in rhs)
    if lz or rz:
        return (0 if rz else -1) if lz else 1
    den = lcm(1, *(e.denominator for _, e in lhs + rhs))
    vec: Dict[int, int] = {}
    terms = [(b, int(e * den), 1) for b, e in lhs] + [(b, int(e * den), -1) for b, e in rhs]
    basis = coprime_basis(x for b, _, _ in terms for x in (b.numerator, b.denominator))
    for b, e, sign in terms:
        for p, v in _valuations(b.numerator, basis).items():
            vec[p] = vec.get(p, 0) + sign * e * v
        for p, v in _valuations(b.denominator, basis).items():
            vec[p] = vec.get(p, 0) - sign * e * v
    vec = {p: v for p, v in vec.items() if v}
    if not vec:
        return 0
    # logs of pairwise coprime integers are linearly independent, so the sum is non-zero
    iv = mpmath.iv
    saved = iv.prec
    prec = 64
    try:
        while prec <= 1 << 20:
            iv.prec = prec
            total = iv.mpf(0)
            for p, v in vec.items():
                total += v * iv.log(iv.mpf(p))
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("sign not resolved")
