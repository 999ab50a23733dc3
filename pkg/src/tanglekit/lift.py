"""Linear operators equivalent to the antilinear combs, and the correlator
contraction forms of the invariants.

The doubled space pairs each qubit copy with a conjugate copy.  A comb's
linear counterpart is obtained by multiplying two operator copies, inserting
one copy/conjugate-copy swap per state copy, and partially transposing the
conjugate-copy factors.  Expectation values of the lifted operators on
|psi o psi| equal squared moduli of the antilinear comb values, which turns
the invariants into contractions of ordinary Pauli correlation functions.

Index conventions used throughout this module:

* Doubled vectors interleave plain and conjugate factors per qubit:
  [plain q1, conj q1, plain q2, conj q2, ...].
* The four-index coupling tensor of the two-copy comb is stored as
  G[k, l, m, n] = coefficient of (s_k . s_l) o (s_m . s_n), i.e. indices
  (plain copy 1, plain copy 2, conj copy 1, conj copy 2).

Normalization constants fixed numerically (asserted in the test suite):

* lifted sigma_y equals exactly 2 x (antisymmetric projector);
* the symmetric-projector back-transform identity holds with ratio
  rhs / lhs = 2 on normalized states;
* the all-pair-comb contraction equals 9 x (three-tangle squared), so the
  pure-coupling form carries a factor 1/9.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, DimensionError, IncompleteTableError
from .qubits import PAULIS, PureState
from .invariants import COMB_METRIC, antilinear_form

MINKOWSKI_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# Ratio constants, fixed by numeric sweeps and pinned by tests.
LIFTED_SIGMA_Y_OVER_P_MINUS = 2.0
P_PLUS_BACKTRANSFORM_RATIO = 2.0
PURE_COUPLING_FORM_SCALE = 1.0 / 9.0

_FORM_AGREEMENT_ATOL = 1e-8


def _kron(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def swap_operator() -> np.ndarray:
    """The 4x4 swap of two single-qubit factors, equal to half the summed
    Pauli pair products."""
    return 0.5 * sum(_kron(PAULIS[m], PAULIS[m]) for m in range(4))


def antisymmetric_projector() -> np.ndarray:
    return 0.5 * (np.eye(4) - swap_operator())


def symmetric_projector() -> np.ndarray:
    return 0.5 * (np.eye(4) + swap_operator())


def partial_transpose_right(m: np.ndarray, n_left: int, n_right: int) -> np.ndarray:
    """Transpose the trailing n_right qubit factors of a square matrix on
    n_left + n_right qubits."""
    dl, dr = 2 ** n_left, 2 ** n_right
    if m.shape != (dl * dr, dl * dr):
        raise DimensionError(f"matrix shape {m.shape} incompatible with {n_left}+{n_right} qubits")
    return m.reshape(dl, dr, dl, dr).transpose(0, 3, 2, 1).reshape(dl * dr, dl * dr)


def _copy_conj_swaps(n_copies: int) -> np.ndarray:
    """Product of the per-copy swaps between plain factor j and conjugate
    factor j, on [plain 1..c, conj 1..c] ordering."""
    n = 2 * n_copies
    d = 2 ** n
    out = np.eye(d)
    for j in range(n_copies):
        m = np.zeros((d, d))
        i, k = j, n_copies + j
        for idx in range(d):
            bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
            bits[i], bits[k] = bits[k], bits[i]
            m[sum(b << (n - 1 - q) for q, b in enumerate(bits)), idx] = 1.0
        out = out @ m
    return out


def lift_comb(o_hat: np.ndarray) -> np.ndarray:
    """Linear counterpart of the comb with linear part o_hat.

    Accepts a 2x2 single-copy operator (returns a 4x4 matrix on
    [plain, conj]) or a 4x4 two-copy operator (returns a 16x16 matrix on
    [plain 1, plain 2, conj 1, conj 2]).  The result is Hermitian.
    """
    o = np.asarray(o_hat, dtype=complex)
    if o.shape == (2, 2):
        n_copies = 1
    elif o.shape == (4, 4):
        n_copies = 2
    else:
        raise DimensionError(f"comb operator must be 2x2 or 4x4, got shape {o.shape}")
    big = np.kron(o, o) @ _copy_conj_swaps(n_copies)
    lifted = partial_transpose_right(big, n_copies, n_copies)
    if np.max(np.abs(lifted - lifted.conj().T)) > 1e-10:
        raise ConsistencyError("lifted comb operator is not Hermitian within 1e-10")
    return lifted


def lifted_sigma_y() -> np.ndarray:
    return lift_comb(PAULIS[2])


def pair_comb_operator() -> np.ndarray:
    """Linear part of the two-copy comb: the metric-contracted Pauli pair."""
    return sum(COMB_METRIC[m, n] * _kron(PAULIS[m], PAULIS[n])
               for m in range(4) for n in range(4))


@dataclass(frozen=True)
class CombCouplingTensor:
    """Real 4x4x4x4 coefficient tensor of the lifted two-copy comb."""

    values: np.ndarray
    provenance: str  # "derived" | "closed_form"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (4, 4, 4, 4):
            raise DimensionError(f"coupling tensor must be 4x4x4x4, got {v.shape}")
        object.__setattr__(self, "values", v)


# Matrices of the printed closed form for the coupling tensor.
_H_CLOSED = np.zeros((4, 4))
_H_CLOSED[0, 0] = _H_CLOSED[0, 3] = _H_CLOSED[3, 0] = _H_CLOSED[3, 3] = -0.5
_J_CLOSED = np.zeros((4, 4))
_J_CLOSED[0, 0] = _J_CLOSED[0, 3] = _J_CLOSED[3, 0] = _J_CLOSED[3, 3] = 0.5
_J_CLOSED[1, 1] = _J_CLOSED[1, 2] = _J_CLOSED[2, 1] = _J_CLOSED[2, 2] = 0.25


@lru_cache(maxsize=None)
def _coupling_values(provenance: str) -> np.ndarray:
    g = np.zeros((4, 4, 4, 4))
    if provenance == "derived":
        lifted = lift_comb(pair_comb_operator())
        for idx in np.ndindex(4, 4, 4, 4):
            k, l, m, n = idx
            val = np.trace(lifted @ _kron(PAULIS[k], PAULIS[l], PAULIS[m], PAULIS[n])) / 16
            if abs(val.imag) > 1e-12:
                raise ConsistencyError(f"coupling tensor entry {idx} has imaginary part {val.imag!r}")
            g[idx] = val.real
    elif provenance == "closed_form":
        # |eps_ab| read as the indicator of a != b (the two-index epsilon over
        # four-valued indices is otherwise undefined); validated against the
        # derived tensor, which is authoritative wherever they differ.
        for idx in np.ndindex(4, 4, 4, 4):
            k, l, m, n = idx
            val = 0.0
            if k + l == 3 and l + n == 3 and k != m and l != n:
                val += _H_CLOSED[m, n]
            if k == m and l == n:
                val += _J_CLOSED[m, n]
            g[idx] = val
    else:
        raise ValueError(f"provenance must be 'derived' or 'closed_form', got {provenance!r}")
    g.setflags(write=False)
    return g


def coupling_tensor(provenance: str = "derived") -> CombCouplingTensor:
    """The coupling tensor, either mechanically derived by trace projection
    of the lifted two-copy comb or transcribed from the printed closed form."""
    return CombCouplingTensor(_coupling_values(provenance), provenance)


def coupling_tensor_diff_report() -> dict:
    """Entrywise comparison of the closed-form and derived tensors."""
    gd = _coupling_values("derived")
    gc = _coupling_values("closed_form")
    diff = gc - gd
    entries = []
    for idx in np.ndindex(4, 4, 4, 4):
        if abs(gd[idx]) > 1e-12 or abs(gc[idx]) > 1e-12:
            entries.append({"index": list(idx), "derived": float(gd[idx]),
                            "closed_form": float(gc[idx]), "diff": float(diff[idx])})
    return {
        "max_abs_diff": float(np.max(np.abs(diff))),
        "n_nonzero_derived": int(np.count_nonzero(np.abs(gd) > 1e-12)),
        "n_nonzero_closed_form": int(np.count_nonzero(np.abs(gc) > 1e-12)),
        "n_entries_differing": int(np.count_nonzero(np.abs(diff) > 1e-12)),
        "entries": entries,
    }


@lru_cache(maxsize=None)
def _spin_flip_pair_tensor() -> np.ndarray:
    """Coupling tensor of the lifted two-copy spin-flip pair sigma_y . sigma_y:
    quarter of the doubled Minkowski metric pattern."""
    k = 0.25 * np.einsum("km,ln->klmn", MINKOWSKI_METRIC, MINKOWSKI_METRIC)
    k.setflags(write=False)
    return k


def _as_array(table, n_qubits: int) -> np.ndarray:
    """Accept a raw (4,)*n ndarray or any object with a to_array() method."""
    if hasattr(table, "to_array"):
        arr = table.to_array()
    else:
        arr = np.asarray(table, dtype=float)
    if arr.shape != (4,) * n_qubits:
        raise DimensionError(
            f"correlator array has shape {arr.shape}, expected {(4,) * n_qubits}")
    if np.any(np.isnan(arr)):
        missing = [tuple(int(i) for i in idx) for idx in np.argwhere(np.isnan(arr))]
        raise IncompleteTableError(missing)
    return arr


def concurrence_sq_linear(table) -> float:
    """Squared concurrence as a Minkowski-metric contraction of the 16
    two-qubit Pauli correlators.  Exact pure-state tables give |C|^2."""
    t = _as_array(table, 2)
    return float(0.25 * np.einsum("ab,cd,ac,bd->", MINKOWSKI_METRIC, MINKOWSKI_METRIC,
                                  t, t, optimize=True))


def _tau3_contraction(g1: np.ndarray, g2: np.ndarray, g3: np.ndarray,
                      t: np.ndarray) -> float:
    # Per qubit q, the tensor gq couples its four indices to the four
    # correlator factors: (plain 1, plain 2, conj 1, conj 2) of qubit q.
    return float(np.einsum("aeim,bfjn,cgko,abc,efg,ijk,mno->",
                           g1, g2, g3, t, t, t, t, optimize=True))


def tau3_sq_linear(table, form: str = "mixed_form") -> float:
    """Squared three-tangle as a contraction of the 64 three-qubit Pauli
    correlators.

    mixed_form couples qubits 1 and 2 through doubled Minkowski metrics and
    qubit 3 through the derived coupling tensor; pure_G_form couples all
    three qubits through the coupling tensor and carries the numerically
    fixed 1/9 scale.  Both equal the squared tangle on exact pure tables.
    """
    t = _as_array(table, 3)
    k = _spin_flip_pair_tensor()
    g = _coupling_values("derived")
    if form == "mixed_form":
        return _tau3_contraction(k, k, g, t)
    if form == "pure_G_form":
        return PURE_COUPLING_FORM_SCALE * _tau3_contraction(g, g, g, t)
    raise ValueError(f"form must be 'mixed_form' or 'pure_G_form', got {form!r}")


def concurrence_sq_gradient(table) -> np.ndarray:
    """d(concurrence_sq_linear)/dT as a 4x4 array, for first-order error
    propagation through the contraction."""
    t = _as_array(table, 2)
    m = MINKOWSKI_METRIC
    g1 = np.einsum("ab,cd,bd->ac", m, m, t, optimize=True)
    g2 = np.einsum("ab,cd,ac->bd", m, m, t, optimize=True)
    return 0.25 * (g1 + g2)


def tau3_sq_gradient(table, form: str = "mixed_form") -> np.ndarray:
    """d(tau3_sq_linear)/dT as a 4x4x4 array."""
    t = _as_array(table, 3)
    k = _spin_flip_pair_tensor()
    g = _coupling_values("derived")
    if form == "mixed_form":
        tensors, scale = (k, k, g), 1.0
    elif form == "pure_G_form":
        tensors, scale = (g, g, g), PURE_COUPLING_FORM_SCALE
    else:
        raise ValueError(f"form must be 'mixed_form' or 'pure_G_form', got {form!r}")
    g1, g2, g3 = tensors
    grad = np.einsum("aeim,bfjn,cgko,efg,ijk,mno->abc", g1, g2, g3, t, t, t, optimize=True)
    grad = grad + np.einsum("aeim,bfjn,cgko,abc,ijk,mno->efg", g1, g2, g3, t, t, t, optimize=True)
    grad = grad + np.einsum("aeim,bfjn,cgko,abc,efg,mno->ijk", g1, g2, g3, t, t, t, optimize=True)
    grad = grad + np.einsum("aeim,bfjn,cgko,abc,efg,ijk->mno", g1, g2, g3, t, t, t, optimize=True)
    return scale * grad


def tau3_sq_linear_checked(table) -> float:
    """Evaluate both contraction forms and fail if they disagree beyond
    tolerance; intended for exact tables."""
    mixed = tau3_sq_linear(table, "mixed_form")
    pure = tau3_sq_linear(table, "pure_G_form")
    if abs(mixed - pure) > _FORM_AGREEMENT_ATOL:
        raise ConsistencyError(
            f"contraction forms disagree: mixed_form = {mixed!r}, pure_G_form = {pure!r}")
    return mixed


def doubled_vector(state: PureState) -> np.ndarray:
    """|psi o psi| on the per-qubit doubled space, ordered
    [plain q1, conj q1, plain q2, conj q2, ...]."""
    n = state.n_qubits
    a = state.amplitudes.reshape((2,) * n)
    v = np.tensordot(a, a, axes=0)  # [plain qubits..., conj qubits...]
    perm = [x for q in range(n) for x in (q, n + q)]
    return v.transpose(perm).reshape(4 ** n)


def p_plus_quantity(phi: PureState) -> float:
    """Symmetric-projector pair expectation on a doubled two-qubit state.
    Not SL invariant, unlike its antisymmetric counterpart."""
    if phi.n_qubits != 2:
        raise DimensionError(f"needs n=2, got n={phi.n_qubits}")
    v = doubled_vector(phi)
    pp = symmetric_projector()
    val = v.conj() @ _kron(pp, pp) @ v
    return float(val.real)


def p_minus_quantity(phi: PureState) -> float:
    """Lifted spin-flip pair expectation on a doubled two-qubit state; equals
    the squared modulus of the concurrence polynomial, hence SL invariant."""
    if phi.n_qubits != 2:
        raise DimensionError(f"needs n=2, got n={phi.n_qubits}")
    v = doubled_vector(phi)
    ly = lifted_sigma_y()
    val = v.conj() @ _kron(ly, ly) @ v
    return float(val.real)


def p_plus_identity_check(psi: PureState) -> tuple[float, float]:
    """Back-transform identity for the symmetric projector on one qubit.

    lhs is the symmetric-projector expectation on the doubled state; rhs is
    the gamma-metric contraction of single-qubit antilinear forms.  On
    normalized states rhs / lhs equals P_PLUS_BACKTRANSFORM_RATIO exactly.
    """
    if psi.n_qubits != 1:
        raise DimensionError(f"needs n=1, got n={psi.n_qubits}")
    v = doubled_vector(psi)
    lhs = float((v.conj() @ symmetric_projector() @ v).real)
    gamma = np.diag([1.0, 1.0, 0.0, 1.0])
    u = np.array([antilinear_form(psi, (m,)) for m in range(4)])
    # <psi*|s_n|psi> is the raw bilinear of the unconjugated amplitudes
    a = psi.amplitudes
    ubar = np.array([a @ PAULIS[n] @ a for n in range(4)])
    rhs = complex(np.einsum("mn,m,n->", gamma, u, ubar))
    if abs(rhs.imag) > 1e-10:
        raise ConsistencyError(f"back-transform rhs has imaginary part {rhs.imag!r}")
    return lhs, float(rhs.real)


def write_coupling_tensor_csv(path, tensor: CombCouplingTensor) -> None:
    """256-row CSV: kappa,lambda,mu,nu,value,provenance."""
    lines = ["kappa,lambda,mu,nu,value,provenance"]
    for idx in np.ndindex(4, 4, 4, 4):
        lines.append(",".join(map(str, idx)) + f",{tensor.values[idx]!r},{tensor.provenance}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
