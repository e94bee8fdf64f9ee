"""Zeroness of algebraic circuits at complex roots of unity.

Engines: an exact small-order oracle, a finite-field Monte Carlo test,
a rigorous-numeric conjugate test, an exact vanishing-space method for
sparse polynomials, a deterministic method for sums of powers of one
sparse polynomial, and an equality test for grammar-compressed strings
built on the same machinery.
"""

from .circuit import (
    Circuit,
    CircuitError,
    CircuitKind,
    InputGate,
    ProblemInstance,
    ProductGate,
    SparsePoly,
    SumGate,
    TooLarge,
    circuit_from_sparse,
    classify,
    instance_size,
    parse_circuit,
    parse_instance,
    print_circuit,
    syntactic_degree,
    to_sparse,
)
from .diagonal import (
    DiagonalInstance,
    diagonal_cit,
    duality_expand,
    generator_bound,
    kronecker_substitute,
    orbit,
    parse_diagonal,
    separation_bound,
)
from .ffcit import (
    FfTrialTranscript,
    NonZeroCertificate,
    Verdict,
    cit_ff,
    eval_circuit_mod,
    make_certificate,
    miller_rabin,
    primitive_nth_root,
    sample_generator_candidate,
    sample_prime_1mod_n,
    verify_certificate,
)
from .numeric import (
    BallComplex,
    PrecisionBudget,
    PrecisionExhausted,
    approx_pi,
    approx_root_of_unity,
    cit_numeric,
    eval_circuit_ball,
    sample_conjugate_exponent,
)
from .oracle import (
    CapExceeded,
    CycloElem,
    all_conjugate_values,
    conjugate,
    cyclotomic_poly,
    eval_circuit_exact,
    norm,
    reduce_poly,
)
from .slp import (
    Slp,
    TooLong,
    decompress,
    parse_slp,
    slp_equal,
    to_word_polynomial,
    word_length,
)
from .sparse import (
    PartialFactorization,
    RationalSubspace,
    collapse_map,
    conjugates_equal,
    hadamard_product,
    orth_complement,
    partial_factor,
    sparse_cit,
    vanish_space,
    vanish_space_prime_power,
    vanish_space_residual,
)

__version__ = "0.1.0"
