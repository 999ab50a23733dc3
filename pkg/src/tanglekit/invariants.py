"""Antilinear comb and filter expectation values.

The local building blocks ("combs") are antilinear operators with zero
expectation value on every single-qubit pure state; tensoring combs over
qubits and copies yields multi-copy filters whose expectation values are
polynomial local-SL invariants.  The two-qubit concurrence, the three-qubit
tangle and the even-n n-tangle are the concrete instances exposed here.

Conjugation is component-wise in the fixed computational basis throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FilterSpecError, ParameterError
from .qubits import PAULIS, PureState, check_pauli_string, pauli_operator

# Index-contraction metric for the two-copy comb: diag{1, -1, 0, -1}.
COMB_METRIC = np.diag([1.0, -1.0, 0.0, -1.0])


def antilinear_form(state: PureState, s) -> complex:
    """<psi|P|psi*> with P the Pauli string s and |psi*> the component-wise
    conjugate of |psi> in the fixed basis."""
    s = check_pauli_string(s, state.n_qubits)
    v = state.amplitudes.conj()
    return complex(v @ pauli_operator(s) @ v)


def comb_value_single(phi: PureState) -> complex:
    """Single-copy comb sigma_y * conjugation on one qubit; identically zero."""
    if phi.n_qubits != 1:
        raise DimensionError(f"single-qubit comb needs n=1, got n={phi.n_qubits}")
    return antilinear_form(phi, (2,))


def comb_value_double(phi: PureState) -> complex:
    """Two-copy comb: the metric-contracted Pauli pair evaluated on two copies
    of a single-qubit state; identically zero."""
    if phi.n_qubits != 1:
        raise DimensionError(f"two-copy comb needs n=1, got n={phi.n_qubits}")
    t = np.array([antilinear_form(phi, (mu,)) for mu in range(4)])
    return complex(t @ COMB_METRIC @ t)


def concurrence_polynomial(phi: PureState) -> complex:
    """The unnormalized degree-2 concurrence polynomial <phi|sy x sy|phi*>.

    Exposed separately from concurrence() because the polynomial (not its
    modulus) is what local-SL maps leave invariant.
    """
    if phi.n_qubits != 2:
        raise DimensionError(f"concurrence needs n=2, got n={phi.n_qubits}")
    return antilinear_form(phi, (2, 2))


def concurrence(phi: PureState) -> float:
    """Two-qubit concurrence |<phi|sy x sy|phi*>| in [0, 1]."""
    if not phi.normalized:
        raise ParameterError("concurrence requires a normalized state")
    return abs(concurrence_polynomial(phi))


def tangle_polynomial(chi: PureState) -> complex:
    """The unnormalized degree-4 three-qubit tangle polynomial: the comb-metric
    contraction of <chi|s_mu x sy x sy|chi*> against itself."""
    if chi.n_qubits != 3:
        raise DimensionError(f"three-qubit tangle needs n=3, got n={chi.n_qubits}")
    a = np.array([antilinear_form(chi, (mu, 2, 2)) for mu in range(4)])
    return complex(a @ COMB_METRIC @ a)


def three_tangle(chi: PureState) -> float:
    """Three-qubit tangle |metric contraction| in [0, 1]; 1 on GHZ, 0 on W."""
    if not chi.normalized:
        raise ParameterError("three_tangle requires a normalized state")
    return abs(tangle_polynomial(chi))


def n_tangle(psi: PureState) -> float:
    """|<psi|sy^n|psi*>|^2 for an even number of qubits."""
    if psi.n_qubits % 2 != 0:
        raise ParameterError(f"n_tangle needs an even qubit count, got {psi.n_qubits}")
    if not psi.normalized:
        raise ParameterError("n_tangle requires a normalized state")
    return abs(antilinear_form(psi, (2,) * psi.n_qubits)) ** 2


@dataclass(frozen=True)
class FilterSpec:
    """A multi-copy antilinear filter.

    slots[c][q] names the Pauli at copy c, qubit q: an int 0..3 fixes it, None
    marks it as contracted.  pairs lists ((copy, qubit), (copy, qubit)) slot
    pairs joined through the comb metric.  Every None slot must appear in
    exactly one pair.
    """

    n_qubits: int
    n_copies: int
    slots: tuple
    pairs: tuple

    def __post_init__(self):
        slots = tuple(tuple(s) for s in self.slots)
        pairs = tuple((tuple(a), tuple(b)) for a, b in self.pairs)
        if len(slots) != self.n_copies or any(len(c) != self.n_qubits for c in slots):
            raise FilterSpecError(
                f"slots must be {self.n_copies} copies x {self.n_qubits} qubits")
        free = set()
        for c, copy in enumerate(slots):
            for q, v in enumerate(copy):
                if v is None:
                    free.add((c, q))
                elif v not in (0, 1, 2, 3):
                    raise FilterSpecError(f"fixed slot ({c},{q}) must be 0..3, got {v!r}")
        seen = []
        for a, b in pairs:
            seen.extend([a, b])
        if sorted(seen) != sorted(free) or len(set(seen)) != len(seen):
            raise FilterSpecError(
                "every open slot must appear in exactly one contraction pair")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "pairs", pairs)

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_copies": self.n_copies,
            "slots": [list(c) for c in self.slots],
            "pairs": [[list(a), list(b)] for a, b in self.pairs],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "FilterSpec":
        try:
            return cls(int(d["n_qubits"]), int(d["n_copies"]),
                       tuple(tuple(s) for s in d["slots"]),
                       tuple((tuple(a), tuple(b)) for a, b in d["pairs"]))
        except (KeyError, TypeError) as exc:
            raise FilterSpecError(f"malformed filter spec: {exc}")


def concurrence_filter_spec() -> FilterSpec:
    return FilterSpec(2, 1, ((2, 2),), ())


def three_tangle_filter_spec() -> FilterSpec:
    return FilterSpec(3, 2, ((None, 2, 2), (None, 2, 2)), ((((0, 0)), ((1, 0))),))


def filter_value(psi: PureState, spec: FilterSpec) -> complex:
    """Evaluate a multi-copy antilinear filter by brute-force summation over
    all Pauli assignments of the contracted slots."""
    if psi.n_qubits != spec.n_qubits:
        raise DimensionError(
            f"state has {psi.n_qubits} qubits, filter expects {spec.n_qubits}")
    total = 0.0 + 0.0j
    n_pairs = len(spec.pairs)
    for assign in np.ndindex(*([4, 4] * n_pairs)):
        coeff = 1.0
        values = {}
        for p, (a, b) in enumerate(spec.pairs):
            mu, nu = assign[2 * p], assign[2 * p + 1]
            coeff *= COMB_METRIC[mu, nu]
            values[a] = mu
            values[b] = nu
        if coeff == 0.0:
            continue
        term = coeff
        for c in range(spec.n_copies):
            s = tuple(values[(c, q)] if spec.slots[c][q] is None else spec.slots[c][q]
                      for q in range(spec.n_qubits))
            term *= antilinear_form(psi, s)
        total += term
    return complex(total)
