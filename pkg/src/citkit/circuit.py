"""Algebraic circuits over monomial leaves, their text format and analysis.

A circuit is a DAG of gates over a single variable x.  Leaves are monomials
``x^e`` with e a nonnegative integer in binary; interior gates are integer
weighted sums or n-ary products.  The line-oriented file format:

    # comment
    n 12                      # optional here, required to form an instance
    degree_bound 3            # optional unary-degree promise
    g0 = X^0
    g1 = X^1
    g2 = X^2
    g3 = SUM 1*g0 -1*g1 1*g2
    g4 = MUL g3 g3
    out g3

Gate names match ``g[0-9]+`` and must be defined before use.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .numutil import int_bits


class CircuitError(ValueError):
    """Raised on malformed circuit text or inconsistent structure."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class TooLarge(Exception):
    """Expansion exceeded the term budget; use a different engine."""


@dataclass(frozen=True)
class InputGate:
    exponent: int


@dataclass(frozen=True)
class SumGate:
    addends: tuple[tuple[int, int], ...]  # (weight, gate index)


@dataclass(frozen=True)
class ProductGate:
    factors: tuple[int, ...]


Gate = InputGate | SumGate | ProductGate


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...]
    output: int
    degree_bound: int | None = None
    source_bytes: int | None = field(default=None, compare=False)

    def __post_init__(self):
        validate_circuit(self)


@dataclass(frozen=True)
class SparsePoly:
    """Sparse integer polynomial: nonzero coefficients, exponents ascending."""

    terms: tuple[tuple[int, int], ...]  # (coeff, exponent)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]]) -> "SparsePoly":
        acc: dict[int, int] = {}
        for c, k in terms:
            if k < 0:
                raise ValueError("negative exponent in sparse polynomial")
            acc[k] = acc.get(k, 0) + c
        return cls(tuple((acc[k], k) for k in sorted(acc) if acc[k]))

    def is_zero(self) -> bool:
        return not self.terms

    def reduce_exponents(self, n: int) -> "SparsePoly":
        """Merge terms after reducing exponents mod n."""
        return SparsePoly.from_terms((c, k % n) for c, k in self.terms)

    def substitute_power(self, a: int) -> "SparsePoly":
        """The polynomial f(x^a)."""
        return SparsePoly.from_terms((c, k * a) for c, k in self.terms)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return SparsePoly.from_terms(
            list(self.terms) + [(-c, k) for c, k in other.terms]
        )


@dataclass(frozen=True)
class ProblemInstance:
    circuit: Circuit
    n: int
    s: int

    @classmethod
    def create(cls, circuit: Circuit, n: int) -> "ProblemInstance":
        if n < 1:
            raise CircuitError("root-of-unity order n must be positive")
        return cls(circuit, n, instance_size(circuit, n))


class CircuitKind(enum.Enum):
    SPARSE = "sparse"
    POWERFUL_SKEW = "powerful-skew"
    BOUNDED_DEGREE = "bounded-degree"
    GENERAL = "general"


class Classification(NamedTuple):
    kind: CircuitKind
    degree: int


def validate_circuit(circuit: Circuit) -> None:
    gates = circuit.gates
    if not gates:
        raise CircuitError("circuit has no gates")
    if not 0 <= circuit.output < len(gates):
        raise CircuitError("output index out of range")
    for idx, g in enumerate(gates):
        if isinstance(g, InputGate):
            if g.exponent < 0:
                raise CircuitError(f"gate {idx}: negative exponent")
        elif isinstance(g, SumGate):
            if not g.addends:
                raise CircuitError(f"gate {idx}: empty sum")
            for _, j in g.addends:
                if not 0 <= j < idx:
                    raise CircuitError(f"gate {idx}: reference {j} does not precede it")
        elif isinstance(g, ProductGate):
            if not g.factors:
                raise CircuitError(f"gate {idx}: empty product")
            for j in g.factors:
                if not 0 <= j < idx:
                    raise CircuitError(f"gate {idx}: reference {j} does not precede it")
        else:
            raise CircuitError(f"gate {idx}: unknown gate type")
    if circuit.degree_bound is not None:
        if syntactic_degree(circuit) > circuit.degree_bound:
            raise CircuitError("syntactic degree exceeds declared degree_bound")


_GATE_NAME = re.compile(r"^g[0-9]+$")
_ADDEND = re.compile(r"^(?:([+-]?[0-9]+)\*)?(g[0-9]+)$")


def _parse_lines(text: str):
    """Yields (lineno, stripped) for content lines; strips '#' comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_circuit_text(text: str) -> tuple[Circuit, int | None]:
    """Parse circuit text, returning the circuit and the n header if present."""
    names: dict[str, int] = {}
    gates: list[Gate] = []
    n: int | None = None
    degree_bound: int | None = None
    output: int | None = None

    current: list[str] = [""]

    def resolve(name: str, lineno: int) -> int:
        if name not in names:
            if name == current[0]:
                raise CircuitError(f"cycle: '{name}' refers to itself", lineno)
            raise CircuitError(f"reference to undefined or later gate '{name}'", lineno)
        return names[name]

    for lineno, line in _parse_lines(text):
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "n":
            if not rest.isdigit():
                raise CircuitError("malformed n header", lineno)
            n = int(rest)
            if n < 1:
                raise CircuitError("n must be positive", lineno)
            continue
        if head == "degree_bound":
            if not rest.isdigit():
                raise CircuitError("malformed degree_bound header", lineno)
            degree_bound = int(rest)
            continue
        if head == "out":
            target = rest[1:].strip() if rest.startswith("=") else rest
            if output is not None:
                raise CircuitError("duplicate output designation", lineno)
            output = resolve(target, lineno)
            continue
        # gate definition: NAME = BODY
        name, eq, body = (t.strip() for t in line.partition("="))
        if not eq:
            raise CircuitError(f"unrecognized line '{line}'", lineno)
        if not _GATE_NAME.match(name):
            raise CircuitError(f"bad gate name '{name}'", lineno)
        if name in names:
            raise CircuitError(f"duplicate definition of '{name}'", lineno)
        current[0] = name
        if body.startswith("X^"):
            exp = body[2:]
            if not exp.isdigit():
                raise CircuitError("malformed monomial exponent", lineno)
            gate: Gate = InputGate(int(exp))
        elif body.startswith("SUM"):
            addends = []
            for tok in body[3:].split():
                m = _ADDEND.match(tok)
                if not m:
                    raise CircuitError(f"malformed sum addend '{tok}'", lineno)
                w = int(m.group(1)) if m.group(1) is not None else 1
                addends.append((w, resolve(m.group(2), lineno)))
            if not addends:
                raise CircuitError("empty sum", lineno)
            gate = SumGate(tuple(addends))
        elif body.startswith("MUL"):
            factors = []
            for tok in body[3:].split():
                if not _GATE_NAME.match(tok):
                    raise CircuitError(f"malformed product factor '{tok}'", lineno)
                factors.append(resolve(tok, lineno))
            if not factors:
                raise CircuitError("empty product", lineno)
            gate = ProductGate(tuple(factors))
        else:
            raise CircuitError(f"unrecognized gate body '{body}'", lineno)
        names[name] = len(gates)
        gates.append(gate)

    if not gates:
        raise CircuitError("no gates defined")
    if output is None:
        raise CircuitError("no output gate designated")
    circuit = Circuit(
        tuple(gates), output, degree_bound, source_bytes=len(text.encode())
    )
    return circuit, n


def parse_circuit(text: str) -> Circuit:
    return parse_circuit_text(text)[0]


def parse_instance(text: str, n_override: int | None = None) -> ProblemInstance:
    circuit, n = parse_circuit_text(text)
    if n_override is not None:
        n = n_override
    if n is None:
        raise CircuitError("missing n header (and no override given)")
    return ProblemInstance.create(circuit, n)


def print_circuit(circuit: Circuit, n: int | None = None) -> str:
    """Canonical text form; round-trips through parse_circuit."""
    lines = []
    if n is not None:
        lines.append(f"n {n}")
    if circuit.degree_bound is not None:
        lines.append(f"degree_bound {circuit.degree_bound}")
    for idx, g in enumerate(circuit.gates):
        if isinstance(g, InputGate):
            lines.append(f"g{idx} = X^{g.exponent}")
        elif isinstance(g, SumGate):
            body = " ".join(f"{w}*g{j}" for w, j in g.addends)
            lines.append(f"g{idx} = SUM {body}")
        else:
            body = " ".join(f"g{j}" for j in g.factors)
            lines.append(f"g{idx} = MUL {body}")
    lines.append(f"out g{circuit.output}")
    return "\n".join(lines) + "\n"


def edge_count(circuit: Circuit) -> int:
    total = 0
    for g in circuit.gates:
        if isinstance(g, SumGate):
            total += len(g.addends)
        elif isinstance(g, ProductGate):
            total += len(g.factors)
    return total


def constant_bits(circuit: Circuit) -> int:
    """Total bit-length of integer constants: input exponents and sum weights."""
    total = 0
    for g in circuit.gates:
        if isinstance(g, InputGate):
            total += int_bits(g.exponent)
        elif isinstance(g, SumGate):
            total += sum(int_bits(w) for w, _ in g.addends)
    return total


def circuit_size(circuit: Circuit) -> int:
    return edge_count(circuit) + constant_bits(circuit)


def instance_size(circuit: Circuit, n: int) -> int:
    """Combined size s: edges + constant bits + bit-length of n."""
    return max(1, circuit_size(circuit) + int_bits(n))


def syntactic_degree(circuit: Circuit) -> int:
    """Inductive degree: inputs 1, sums max, products sum of child degrees."""
    deg = [0] * len(circuit.gates)
    for idx, g in enumerate(circuit.gates):
        if isinstance(g, InputGate):
            deg[idx] = 1
        elif isinstance(g, SumGate):
            deg[idx] = max(deg[j] for _, j in g.addends)
        else:
            deg[idx] = sum(deg[j] for j in g.factors)
    return deg[circuit.output]


def coeff_l1_log2(circuit: Circuit) -> int:
    """Upper bound on log2 of the coefficient L1 norm of each gate's polynomial.

    Cheap gate-by-gate bound (inputs 1, sums weighted, products multiply);
    used to size numeric working precision without expanding the circuit.
    """
    CAP = 1 << 16  # switch to exponent arithmetic beyond this many bits
    exact: list[int | None] = [None] * len(circuit.gates)
    logb = [0] * len(circuit.gates)

    for idx, g in enumerate(circuit.gates):
        if isinstance(g, InputGate):
            exact[idx] = 1
            logb[idx] = 0
        elif isinstance(g, SumGate):
            if all(exact[j] is not None for _, j in g.addends):
                v = sum(abs(w) * exact[j] for w, j in g.addends)
                if v.bit_length() <= CAP:
                    exact[idx] = v
                    logb[idx] = max(v.bit_length() - 1, 0) + 1
                    continue
            logb[idx] = max(
                int_bits(w) + logb[j] for w, j in g.addends
            ) + len(g.addends).bit_length()
        else:
            if all(exact[j] is not None for j in g.factors):
                v = 1
                for j in g.factors:
                    v *= exact[j]
                if v.bit_length() <= CAP:
                    exact[idx] = v
                    logb[idx] = max(v.bit_length() - 1, 0) + 1
                    continue
            logb[idx] = sum(logb[j] for j in g.factors)
    out = circuit.output
    if exact[out] is not None:
        v = exact[out]
        return v.bit_length() if v else 0
    return logb[out]


def classify(circuit: Circuit, bounded_threshold: int | None = None) -> Classification:
    """Most specific circuit class, with the syntactic degree.

    Sparse means degree 1; powerful-skew means every product gate has at
    most one non-leaf factor; bounded-degree compares against the explicit
    degree_bound header or, failing that, 4x the source byte size.
    """
    d = syntactic_degree(circuit)
    if d == 1:
        return Classification(CircuitKind.SPARSE, d)
    skew = True
    for g in circuit.gates:
        if isinstance(g, ProductGate):
            non_leaf = sum(
                1 for j in g.factors if not isinstance(circuit.gates[j], InputGate)
            )
            if non_leaf > 1:
                skew = False
                break
    if skew:
        return Classification(CircuitKind.POWERFUL_SKEW, d)
    if bounded_threshold is None:
        if circuit.degree_bound is not None:
            bounded_threshold = circuit.degree_bound
        else:
            src = circuit.source_bytes
            if src is None:
                src = len(print_circuit(circuit).encode())
            bounded_threshold = 4 * src
    if d <= bounded_threshold:
        return Classification(CircuitKind.BOUNDED_DEGREE, d)
    return Classification(CircuitKind.GENERAL, d)


def to_sparse(circuit: Circuit, term_budget: int | None = None) -> SparsePoly:
    """Full expansion to a sparse polynomial.

    Raises TooLarge as soon as any intermediate gate holds more than
    term_budget monomials (None means unbounded).
    """
    vals: list[dict[int, int]] = []

    def check(d: dict[int, int]) -> dict[int, int]:
        if term_budget is not None and len(d) > term_budget:
            raise TooLarge(f"more than {term_budget} terms")
        return d

    for g in circuit.gates:
        if isinstance(g, InputGate):
            vals.append(check({g.exponent: 1}))
        elif isinstance(g, SumGate):
            acc: dict[int, int] = {}
            for w, j in g.addends:
                if w == 0:
                    continue
                for k, c in vals[j].items():
                    nc = acc.get(k, 0) + w * c
                    if nc:
                        acc[k] = nc
                    else:
                        acc.pop(k, None)
                check(acc)
            vals.append(acc)
        else:
            acc = {0: 1}
            for j in g.factors:
                nxt: dict[int, int] = {}
                for k1, c1 in acc.items():
                    for k2, c2 in vals[j].items():
                        k = k1 + k2
                        nc = nxt.get(k, 0) + c1 * c2
                        if nc:
                            nxt[k] = nc
                        else:
                            nxt.pop(k, None)
                    check(nxt)
                acc = nxt
            vals.append(acc)
    out = vals[circuit.output]
    return SparsePoly(tuple((out[k], k) for k in sorted(out)))


def circuit_from_sparse(poly: SparsePoly, degree_bound: int | None = None) -> Circuit:
    """A degree-1 circuit (one weighted sum of monomial leaves) for poly."""
    gates: list[Gate] = []
    if poly.is_zero():
        gates.append(InputGate(0))
        gates.append(SumGate(((0, 0),)))
    else:
        addends = []
        for c, k in poly.terms:
            gates.append(InputGate(k))
            addends.append((c, len(gates) - 1))
        gates.append(SumGate(tuple(addends)))
    return Circuit(tuple(gates), len(gates) - 1, degree_bound)
