"""Shared builders: reference circuits, randomized instance corpora."""

from __future__ import annotations

import random

import pytest

from citkit import circuit as circ
from citkit import oracle
from citkit.circuit import (
    Circuit,
    InputGate,
    ProblemInstance,
    ProductGate,
    SparsePoly,
    SumGate,
    circuit_from_sparse,
)
from citkit.diagonal import DiagonalInstance


def sparse_of_dense(coeffs) -> SparsePoly:
    return SparsePoly(tuple((c, k) for k, c in enumerate(coeffs) if c))


def phi_poly(n: int) -> SparsePoly:
    return sparse_of_dense(oracle.cyclotomic_poly(n, cap=256))


def phi_circuit(n: int) -> Circuit:
    return circuit_from_sparse(phi_poly(n))


def instance(circuit_obj: Circuit, n: int) -> ProblemInstance:
    return ProblemInstance.create(circuit_obj, n)


def shifted_phi_terms(n: int, shift: int, weight: int = 1) -> SparsePoly:
    """weight * x^shift * Phi_n(x); vanishes at every primitive n-th root."""
    return SparsePoly.from_terms(
        (weight * c, k + shift) for c, k in phi_poly(n).terms
    )


def random_sparse(rng: random.Random, n: int, max_terms: int = 6) -> SparsePoly:
    terms = [
        (rng.randrange(-9, 10), rng.randrange(0, max(n, 1)))
        for _ in range(rng.randrange(1, max_terms + 1))
    ]
    return SparsePoly.from_terms(terms)


# orders whose cyclotomic polynomial stays small enough for cheap plants
SMALL_PHI_N = [
    n for n in range(2, 129) if len(oracle.cyclotomic_poly(n, cap=256)) - 1 <= 16
]


def random_zero_sparse(rng: random.Random, n: int) -> SparsePoly:
    """A sparse polynomial vanishing at zeta_n: a combination of shifted
    copies of Phi_n."""
    out = SparsePoly(())
    for _ in range(rng.randrange(1, 3)):
        shift = rng.randrange(0, n)
        w = rng.choice([-2, -1, 1, 2])
        out = SparsePoly.from_terms(
            list(out.terms) + list(shifted_phi_terms(n, shift, w).terms)
        )
    if out.is_zero():
        out = shifted_phi_terms(n, 0, 1)
    return out


def random_general_circuit(rng: random.Random, n: int) -> Circuit:
    """A small random circuit mixing sums and degree-capped products."""
    gates: list = [InputGate(rng.randrange(0, 2 * n)) for _ in range(rng.randrange(2, 5))]
    degrees = [1] * len(gates)
    for _ in range(rng.randrange(1, 5)):
        if rng.random() < 0.6 or len(gates) < 2:
            k = rng.randrange(1, 4)
            addends = tuple(
                (rng.choice([-3, -2, -1, 1, 2, 3]), rng.randrange(len(gates)))
                for _ in range(k)
            )
            gates.append(SumGate(addends))
            degrees.append(max(degrees[j] for _, j in addends))
        else:
            k = rng.randrange(2, 4)
            factors = tuple(rng.randrange(len(gates)) for _ in range(k))
            if sum(degrees[j] for j in factors) > 8:
                continue
            gates.append(ProductGate(factors))
            degrees.append(sum(degrees[j] for j in factors))
    return Circuit(tuple(gates), len(gates) - 1)


def zero_product_circuit(rng: random.Random, n: int) -> Circuit:
    """Phi_n times a random nonzero-ish factor: vanishes at zeta_n."""
    base = phi_circuit(n)
    gates = list(base.gates)
    out_phi = base.output
    extra = [
        InputGate(rng.randrange(0, n)),
        InputGate(rng.randrange(0, 3 * n)),
    ]
    gates.extend(extra)
    gates.append(
        SumGate(
            (
                (rng.choice([1, 2]), len(gates) - 2),
                (rng.choice([-2, -1, 1]), len(gates) - 1),
            )
        )
    )
    gates.append(ProductGate((out_phi, len(gates) - 1)))
    return Circuit(tuple(gates), len(gates) - 1)


def build_circuit_corpus(
    count: int, seed: int, max_n: int = 128, size_cap: int = 60
) -> list[tuple[ProblemInstance, bool]]:
    """(instance, oracle_is_zero) pairs; roughly a third planted zeros."""
    rng = random.Random(seed)
    out: list[tuple[ProblemInstance, bool]] = []
    small_phi = [n for n in SMALL_PHI_N if n <= max_n]
    while len(out) < count:
        n = rng.randrange(1, max_n + 1)
        style = rng.random()
        if style < 0.20:
            n = rng.choice(small_phi)
            c = circuit_from_sparse(random_zero_sparse(rng, n))
        elif style < 0.35:
            n = rng.choice(small_phi)
            c = zero_product_circuit(rng, n)
        elif style < 0.70:
            c = circuit_from_sparse(random_sparse(rng, max(n, 2)))
        else:
            c = random_general_circuit(rng, n)
        inst = ProblemInstance.create(c, n)
        if inst.s > size_cap:
            continue
        try:
            is_zero = oracle.eval_circuit_exact(c, n).is_zero()
        except (oracle.CapExceeded, oracle.CoefficientOverflow):
            continue
        out.append((inst, is_zero))
    return out


def build_diagonal_corpus(
    count: int, seed: int, max_n: int = 128
) -> list[tuple[DiagonalInstance, bool]]:
    rng = random.Random(seed)
    out: list[tuple[DiagonalInstance, bool]] = []
    small_phi = [n for n in SMALL_PHI_N if n <= max_n]
    while len(out) < count:
        n = rng.randrange(2, max_n + 1)
        if rng.random() < 0.3:
            n = rng.choice(small_phi)
            g = random_zero_sparse(rng, n)
        else:
            g = random_sparse(rng, n, max_terms=5)
        if g.is_zero():
            continue
        powers = tuple(
            rng.randrange(1, 7) for _ in range(rng.randrange(1, 4))
        )
        inst = DiagonalInstance(g, powers, n)
        out.append((inst, diagonal_truth(inst)))
    return out


def diagonal_truth(inst: DiagonalInstance) -> bool:
    """Oracle zeroness of sum(g^{d_i}) at zeta_n, computed exactly."""
    n = inst.n
    g = inst.g.reduce_exponents(n)
    gval = oracle.zero_elem(n)
    for c, k in g.terms:
        gval = gval + oracle.root_power(n, k).scale(c)
    total = oracle.zero_elem(n)
    for d in inst.powers:
        acc = oracle.from_int(n, 1)
        for _ in range(d):
            acc = acc * gval
        total = total + acc
    return total.is_zero()


@pytest.fixture(scope="session")
def fixture_suite() -> list[tuple[ProblemInstance, bool]]:
    """The 40-instance mixed corpus used by error-rate measurements."""
    return build_circuit_corpus(40, seed=2024, max_n=64, size_cap=45)
