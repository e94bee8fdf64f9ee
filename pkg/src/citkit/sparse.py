"""Exact, deterministic zeroness for sparse polynomials at zeta_n.

Works entirely with the s-dimensional space of vanishing coefficient
vectors {a : sum a_i zeta_n^{k_i} = 0}.  The order n is split into primes
at most s and a residual with only larger prime factors; each factor's
vanishing space has an explicit combinatorial description, and the full
space is recovered by composing orthogonal complements under the
coordinatewise (Hadamard) product.  All linear algebra is exact over Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .circuit import SparsePoly
from .ffcit import Verdict
from .numutil import primes_upto


@dataclass(frozen=True)
class RationalSubspace:
    """Subspace of Q^s held as a reduced-row-echelon basis (canonical)."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors) -> "RationalSubspace":
        rows = [[Fraction(x) for x in v] for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        return cls(ambient_dim, _rref(rows))

    @classmethod
    def zero(cls, ambient_dim: int) -> "RationalSubspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "RationalSubspace":
        eye = [
            [Fraction(int(i == j)) for j in range(ambient_dim)]
            for i in range(ambient_dim)
        ]
        return cls(ambient_dim, tuple(tuple(r) for r in eye))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vector) -> bool:
        v = [Fraction(x) for x in vector]
        for row in self.basis:
            pc = _pivot(row)
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return not any(v)


@dataclass(frozen=True)
class PartialFactorization:
    """n = prod(p^e for small factors) * residual, residual's factors > s."""

    small: tuple[tuple[int, int], ...]
    residual: int

    def product(self) -> int:
        out = self.residual
        for p, e in self.small:
            out *= p**e
        return out


def _pivot(row) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    raise ValueError("zero row in basis")


def _rref(rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    if not rows:
        return ()
    ncols = len(rows[0])
    rows = [list(r) for r in rows]
    lead = 0
    for col in range(ncols):
        best = None
        for r in range(lead, len(rows)):
            x = rows[r][col]
            if x and (best is None or abs(x.numerator) > abs(rows[best][col].numerator)):
                best = r
        if best is None:
            continue
        rows[lead], rows[best] = rows[best], rows[lead]
        pv = rows[lead][col]
        rows[lead] = [x / pv for x in rows[lead]]
        for r in range(len(rows)):
            if r != lead and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    return tuple(tuple(r) for r in rows[:lead])


def _kernel(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    R = _rref([list(map(Fraction, r)) for r in rows])
    pivots: dict[int, int] = {}
    for ri, row in enumerate(R):
        pivots[_pivot(row)] = ri
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for pc, ri in pivots.items():
            v[pc] = -R[ri][free]
        basis.append(v)
    return basis


def partial_factor(n: int, s: int) -> PartialFactorization:
    """Trial-divide n by every prime <= s."""
    if n < 1 or s < 1:
        raise ValueError("n and s must be positive")
    small = []
    m = n
    for p in primes_upto(s):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            small.append((p, e))
    return PartialFactorization(tuple(small), m)


def collapse_map(k, modulus: int):
    """Distinct residues of k mod modulus plus the 0/1 summation matrix.

    Returns (k_prime, T) where T is t x s with T[i][j] = 1 iff
    k[j] = k_prime[i] (mod modulus).
    """
    residues = [ki % modulus for ki in k]
    k_prime = tuple(sorted(set(residues)))
    index = {r: i for i, r in enumerate(k_prime)}
    T = [[0] * len(k) for _ in k_prime]
    for j, r in enumerate(residues):
        T[index[r]][j] = 1
    return k_prime, tuple(tuple(row) for row in T)


def _compose(constraints, T):
    """Rows of A @ T over the integers."""
    return [
        [sum(arow[i] * T[i][j] for i in range(len(T))) for j in range(len(T[0]))]
        for arow in constraints
    ]


def vanish_space_prime_power(k, p: int, e: int) -> RationalSubspace:
    """Vanishing space of (zeta_{p^e}^{k_i}) as a subspace of Q^len(k).

    On the distinct residues mod p^e, coordinates agree within each class
    mod p^{e-1} and vanish on classes with fewer than p members; the space
    on the original coordinates is the preimage under the collapse map.
    """
    s = len(k)
    modulus = p**e
    k_prime, T = collapse_map(k, modulus)
    t = len(k_prime)
    classes: dict[int, list[int]] = {}
    for i, r in enumerate(k_prime):
        classes.setdefault(r % (modulus // p), []).append(i)
    constraints: list[list[int]] = []
    for members in classes.values():
        if len(members) < p:
            for i in members:
                row = [0] * t
                row[i] = 1
                constraints.append(row)
        else:
            head = members[0]
            for i in members[1:]:
                row = [0] * t
                row[head] = 1
                row[i] = -1
                constraints.append(row)
    if not constraints:
        return RationalSubspace.full(s)
    return RationalSubspace.from_vectors(s, _kernel(_compose(constraints, T), s))


def vanish_space_residual(k, m: int) -> RationalSubspace:
    """Vanishing space for modulus m, all of whose prime factors exceed len(k).

    Coordinates congruent mod m must sum to zero (kernel of the collapse
    map); raises if the precondition on m's factors fails.
    """
    s = len(k)
    for p in primes_upto(s):
        if m % p == 0:
            raise ValueError(f"residual has small prime factor {p}")
    _, T = collapse_map(k, m)
    return RationalSubspace.from_vectors(s, _kernel([list(r) for r in T], s))


def orth_complement(space: RationalSubspace) -> RationalSubspace:
    """Exact orthogonal complement; dims add up to the ambient dimension."""
    if space.dim == 0:
        return RationalSubspace.full(space.ambient_dim)
    return RationalSubspace.from_vectors(
        space.ambient_dim, _kernel([list(r) for r in space.basis], space.ambient_dim)
    )


def hadamard_product(u: RationalSubspace, v: RationalSubspace) -> RationalSubspace:
    """Span of coordinatewise products of basis vectors."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    prods = [
        [a * b for a, b in zip(bu, bv)] for bu in u.basis for bv in v.basis
    ]
    if not prods:
        return RationalSubspace.zero(u.ambient_dim)
    return RationalSubspace.from_vectors(u.ambient_dim, prods)


def vanish_space(n: int, k) -> RationalSubspace:
    """The space {a in Q^s : sum a_i zeta_n^{k_i} = 0}.

    Composes the prime-power and residual spaces through orthogonal
    complements and Hadamard products; exponents must be strictly
    increasing within [0, n).
    """
    k = tuple(k)
    s = len(k)
    if s == 0:
        return RationalSubspace.zero(0)
    if any(not 0 <= ki < n for ki in k) or any(a >= b for a, b in zip(k, k[1:])):
        raise ValueError("exponents must be strictly increasing in [0, n)")
    pf = partial_factor(n, s)
    comps = [vanish_space_prime_power(k, p, e) for p, e in pf.small]
    comps.append(vanish_space_residual(k, pf.residual))
    prod = orth_complement(comps[0])
    for c in comps[1:]:
        prod = hadamard_product(prod, orth_complement(c))
    return orth_complement(prod)


def sparse_cit(f: SparsePoly, n: int) -> Verdict:
    """Exact zeroness of f(zeta_n) for a sparse polynomial f."""
    g = f.reduce_exponents(n)
    if g.is_zero():
        return Verdict.ZERO
    coeffs = [c for c, _ in g.terms]
    exps = [k for _, k in g.terms]
    space = vanish_space(n, exps)
    return Verdict.ZERO if space.contains(coeffs) else Verdict.NONZERO


def conjugates_equal(g: SparsePoly, n: int, l: int, j: int) -> bool:
    """Whether g(zeta_n^l) = g(zeta_n^j) for unit exponents l, j."""
    if math.gcd(l, n) != 1 or math.gcd(j, n) != 1:
        raise ValueError("conjugate exponents must be coprime to n")
    diff = g.substitute_power(l) - g.substitute_power(j)
    return sparse_cit(diff, n) is Verdict.ZERO
