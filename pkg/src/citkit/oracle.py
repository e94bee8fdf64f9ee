"""Exact arithmetic in Z[zeta_n] for small n: the ground-truth oracle.

Elements are canonical residues modulo the n-th cyclotomic polynomial,
stored as dense integer coefficient vectors of length phi(n).  Everything
here is exact; the phi(n) cap (default 128, override via CIT_ORACLE_CAP or
the cap argument) keeps the oracle honest about its desk-scale role.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import kernels
from .circuit import Circuit, InputGate, ProductGate, SumGate
from .numutil import divisors, euler_phi

DEFAULT_CAP = 128
COEFF_BIT_LIMIT = 1 << 20


class CapExceeded(RuntimeError):
    """phi(n) exceeds the configured oracle cap."""


class CoefficientOverflow(RuntimeError):
    """An intermediate coefficient exceeded the safety bit bound."""


def _cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("CIT_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class CycloElem:
    """Canonical residue mod Phi_n: coefficient vector of length phi(n)."""

    n: int
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "CycloElem") -> "CycloElem":
        assert self.n == other.n
        return CycloElem(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k: int) -> "CycloElem":
        return CycloElem(self.n, tuple(k * c for c in self.coeffs))

    def __mul__(self, other: "CycloElem") -> "CycloElem":
        assert self.n == other.n
        prod = kernels.poly_mul(list(self.coeffs), list(other.coeffs))
        return reduce_poly(prod, self.n)


_phi_cache: dict[int, tuple[int, ...]] = {1: (-1, 1)}


def cyclotomic_poly(n: int, cap: int | None = None) -> list[int]:
    """The n-th cyclotomic polynomial as a dense coefficient vector.

    Computed by exact division of x^n - 1 by Phi_d over the proper
    divisors d of n; monic of degree phi(n).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n not in _phi_cache:
        if euler_phi(n) > _cap(cap):
            raise CapExceeded(f"phi({n}) exceeds oracle cap {_cap(cap)}")
        poly = [0] * (n + 1)
        poly[0], poly[n] = -1, 1
        for d in divisors(n):
            if d < n:
                poly = _div_exact_monic(poly, list(cyclotomic_poly(d, cap)))
        _phi_cache[n] = tuple(poly)
    phi = _phi_cache[n]
    if len(phi) - 1 > _cap(cap):
        raise CapExceeded(f"phi({n}) exceeds oracle cap {_cap(cap)}")
    return list(phi)


def _div_exact_monic(num: list[int], den: list[int]) -> list[int]:
    """Quotient num/den for monic den; remainder must vanish."""
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("inexact cyclotomic division")
    return q


def reduce_poly(coeffs: list[int], n: int, cap: int | None = None) -> CycloElem:
    """Canonical residue of an integer polynomial modulo Phi_n."""
    phi = cyclotomic_poly(n, cap)
    deg = len(phi) - 1
    rem = kernels.poly_rem_monic(list(coeffs), phi)
    rem += [0] * (deg - len(rem))
    return CycloElem(n, tuple(rem))


def zero_elem(n: int, cap: int | None = None) -> CycloElem:
    return CycloElem(n, (0,) * (len(cyclotomic_poly(n, cap)) - 1))


def from_int(n: int, value: int, cap: int | None = None) -> CycloElem:
    deg = len(cyclotomic_poly(n, cap)) - 1
    return CycloElem(n, (value,) + (0,) * (deg - 1))


def root_power(n: int, e: int, cap: int | None = None) -> CycloElem:
    """zeta_n^e as a canonical element (exponent reduced mod n)."""
    e %= n
    return reduce_poly([0] * e + [1], n, cap)


def _check_bits(elem: CycloElem) -> CycloElem:
    if any(abs(c).bit_length() > COEFF_BIT_LIMIT for c in elem.coeffs):
        raise CoefficientOverflow("oracle coefficient exceeded 2^20 bits")
    return elem


def eval_circuit_exact(circuit: Circuit, n: int, cap: int | None = None) -> CycloElem:
    """Exact value of the circuit polynomial at zeta_n."""
    vals: list[CycloElem] = []
    for g in circuit.gates:
        if isinstance(g, InputGate):
            vals.append(root_power(n, g.exponent, cap))
        elif isinstance(g, SumGate):
            acc = zero_elem(n, cap)
            for w, j in g.addends:
                if w:
                    acc = acc + vals[j].scale(w)
            vals.append(_check_bits(acc))
        elif isinstance(g, ProductGate):
            acc = from_int(n, 1, cap)
            for j in g.factors:
                acc = acc * vals[j]
            vals.append(_check_bits(acc))
    return vals[circuit.output]


def conjugate(elem: CycloElem, a: int, cap: int | None = None) -> CycloElem:
    """Image under the automorphism zeta_n -> zeta_n^a, gcd(a, n) = 1."""
    n = elem.n
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not coprime to {n}")
    dense = [0] * n
    for i, c in enumerate(elem.coeffs):
        if c:
            dense[(i * a) % n] += c
    return reduce_poly(dense, n, cap)


def all_conjugate_values(
    circuit: Circuit, n: int, cap: int | None = None
) -> dict[int, CycloElem]:
    """f(zeta_n^a) for every a in Z_n^*, via one evaluation plus conjugation."""
    base = eval_circuit_exact(circuit, n, cap)
    return {
        a: conjugate(base, a, cap) for a in range(1, n + 1) if math.gcd(a, n) == 1
    } if n > 1 else {1: base}


def norm(elem: CycloElem, cap: int | None = None) -> int:
    """Field norm: the product of all Galois conjugates, always an integer.

    Computed as the resultant of Phi_n with the representative polynomial.
    """
    phi = cyclotomic_poly(elem.n, cap)
    rep = _trim(list(elem.coeffs))
    if not rep:
        return 0
    if len(rep) == 1:
        return rep[0] ** (len(phi) - 1)
    return resultant(phi, rep)


def resultant(f: list[int], g: list[int]) -> int:
    """Resultant of two integer polynomials via the subresultant PRS."""
    A = _trim(list(f))
    B = _trim(list(g))
    if not A or not B:
        return 0
    if len(A) == 1:
        return A[0] ** (len(B) - 1)
    if len(B) == 1:
        return B[0] ** (len(A) - 1)
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -s
    a_cont = math.gcd(*A) if len(A) > 1 else abs(A[0])
    b_cont = math.gcd(*B)
    A = [c // a_cont for c in A]
    B = [c // b_cont for c in B]
    t = a_cont ** (len(B) - 1) * b_cont ** (len(A) - 1)
    g_, h = 1, 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        A = B
        denom = g_ * h**delta
        B = [c // denom for c in R]
        g_ = A[-1]
        if delta == 1:
            h = g_
        elif delta > 1:
            h = g_**delta // h ** (delta - 1)
        if len(B) == 1:
            break
    dA = len(A) - 1
    if dA == 1:
        res = B[0]
    else:
        res = B[0] ** dA // h ** (dA - 1)
    return s * t * res


def _prem(A: list[int], B: list[int]) -> list[int]:
    """Pseudo-remainder lc(B)^(deg A - deg B + 1) * A mod B."""
    dB = len(B) - 1
    lead = B[-1]
    R = list(A)
    e = len(A) - 1 - dB + 1
    while R and len(R) - 1 >= dB:
        c = R[-1]
        shift = len(R) - 1 - dB
        R = [lead * r for r in R]
        for j, bj in enumerate(B):
            R[shift + j] -= c * bj
        _trim(R)
        e -= 1
    if e > 0 and R:
        le = lead**e
        R = [le * r for r in R]
    return R
