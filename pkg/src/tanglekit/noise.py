"""White-noise error formulas, their finite-difference oracle, thresholds and
the affine lower bound for the mixed-state tangle.

Two distinct error notions live here.  The formula operations transcribe the
printed first-order estimates for the value of the correlator contraction on
a white-noise mixture.  The oracle computes that first-order slope directly
by finite differences of the exact contraction and reports which printed
variant (if any) reproduces it; where none does, the numeric slope is the
authoritative estimate.  The verdict for the shipped build (pinned as a
regression report): no printed variant matches, for either invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import DimensionError, NumericalStabilityError, ParameterError
from .qubits import PureState, expectation, white_noise_mix
from .invariants import concurrence, three_tangle
from .correlators import exact_correlators
from . import lift

PAIR_CONVENTIONS = ("unordered_pairs", "ordered_pairs")


@dataclass(frozen=True)
class MStats:
    """Single-site, pair and triple z-correlator averages of a 3-qubit state,
    combined as 3 m_z^2 - 3 m_zz^2 + m_zzz^2."""

    m_z: float
    m_zz: float
    m_zzz: float
    m_combined: float
    pair_convention: str

    def __post_init__(self):
        if self.pair_convention not in PAIR_CONVENTIONS:
            raise ParameterError(f"pair_convention must be one of {PAIR_CONVENTIONS}")
        expected = 3 * self.m_z ** 2 - 3 * self.m_zz ** 2 + self.m_zzz ** 2
        if self.m_combined != expected:
            raise ParameterError(
                f"m_combined = {self.m_combined!r} inconsistent with fields ({expected!r})")


def m_statistics(psi: PureState, convention: str = "unordered_pairs") -> MStats:
    """z-correlator statistics entering the printed three-tangle error formula.

    The pair sum is ambiguous in its source; unordered_pairs averages the
    three i<j pairs, ordered_pairs the six i != j ordered pairs (twice as
    large), both divided by 3.
    """
    if psi.n_qubits != 3:
        raise DimensionError(f"m_statistics needs n=3, got n={psi.n_qubits}")
    if convention not in PAIR_CONVENTIONS:
        raise ParameterError(f"pair_convention must be one of {PAIR_CONVENTIONS}")
    singles = [expectation(psi, tuple(3 if q == i else 0 for q in range(3)))
               for i in range(3)]
    pairs = [expectation(psi, tuple(3 if q in (i, j) else 0 for q in range(3)))
             for i, j in ((0, 1), (0, 2), (1, 2))]
    m_z = sum(singles) / 3
    m_zz = sum(pairs) / 3
    if convention == "ordered_pairs":
        m_zz *= 2
    m_zzz = expectation(psi, (3, 3, 3))
    m_combined = 3 * m_z ** 2 - 3 * m_zz ** 2 + m_zzz ** 2
    return MStats(m_z, m_zz, m_zzz, m_combined, convention)


def c2_exp_formula(c2: float, eps: float) -> float:
    """Printed first-order estimate of the measured squared concurrence under
    white noise: c2 - (eps/2)(5 c2 - 1)."""
    if not 0.0 <= c2 <= 1.0:
        raise ParameterError(f"c2 must be in [0, 1], got {c2}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps}")
    return c2 - 0.5 * eps * (5.0 * c2 - 1.0)


def tau3_exp_formula(tau3: float, m: MStats, eps: float) -> float:
    """Printed first-order estimate of the measured three-tangle under white
    noise: tau3 - (eps/2)(9 tau3 - 1 + 3 m_combined)."""
    if not 0.0 <= tau3 <= 1.0:
        raise ParameterError(f"tau3 must be in [0, 1], got {tau3}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps}")
    return tau3 - 0.5 * eps * (9.0 * tau3 - 1.0 + 3.0 * m.m_combined)


def _contraction_on_mixture(psi: PureState, which: str, eps: float) -> float:
    table = exact_correlators(white_noise_mix(psi, eps))
    if which == "c2":
        return lift.concurrence_sq_linear(table.to_array())
    return lift.tau3_sq_linear(table.to_array(), form="mixed_form")


def finite_difference_slope(f, h0: float = 1e-4, rel_tol: float = 1e-6,
                            max_levels: int = 10) -> float:
    """Slope of f at 0 from central differences (f(2h) - f(0)) / 2h centered
    at eps = h, Richardson-refined over halved steps until two successive
    diagonal estimates agree to rel_tol (with an absolute floor for slopes
    near zero)."""
    f0 = f(0.0)
    diag_prev = None
    rows: list[list[float]] = []
    for k in range(max_levels):
        h = h0 / 2 ** k
        est = (f(2 * h) - f0) / (2 * h)
        row = [est]
        for j in range(1, k + 1):
            row.append((2 ** j * row[j - 1] - rows[k - 1][j - 1]) / (2 ** j - 1))
        rows.append(row)
        diag = row[-1]
        if diag_prev is not None and abs(diag - diag_prev) <= rel_tol * max(1.0, abs(diag)):
            return diag
        diag_prev = diag
    raise NumericalStabilityError(
        f"finite-difference slope did not stabilize to {rel_tol} in {max_levels} levels")


@dataclass(frozen=True)
class FirstOrderOracleResult:
    which: str                    # "c2" | "tau3"
    value_at_zero: float          # the contraction at eps = 0
    slope_numeric: float          # d/d eps of the contraction at eps = 0
    formula_slopes: dict          # variant id -> predicted slope of the contraction
    matched_variant: str | None   # variant agreeing with slope_numeric, or None


def first_order_oracle(psi: PureState, which: str) -> FirstOrderOracleResult:
    """Compare the numeric first-order white-noise slope of the correlator
    contraction with every documented reading of the printed formulas.

    For tau3 the printed left-hand side is ambiguous between the tangle and
    its square (the contraction computes the square); predicted slopes for
    the tangle reading are mapped to the squared scale via the chain rule.
    """
    if which not in ("c2", "tau3"):
        raise ParameterError(f"which must be 'c2' or 'tau3', got {which!r}")
    n_needed = 2 if which == "c2" else 3
    if psi.n_qubits != n_needed:
        raise DimensionError(f"{which} oracle needs n={n_needed}, got n={psi.n_qubits}")
    if not psi.normalized:
        raise ParameterError("oracle requires a normalized state")

    slope = finite_difference_slope(lambda e: _contraction_on_mixture(psi, which, e))
    value0 = _contraction_on_mixture(psi, which, 0.0)

    formulas = {}
    if which == "c2":
        c2 = concurrence(psi) ** 2
        formulas["printed_c2"] = -0.5 * (5.0 * c2 - 1.0)
    else:
        tau3 = three_tangle(psi)
        tau3_sq = tau3 ** 2
        for conv in PAIR_CONVENTIONS:
            m = m_statistics(psi, conv).m_combined
            printed = lambda lhs: -0.5 * (9.0 * lhs - 1.0 + 3.0 * m)
            formulas[f"printed_tau3_lhs_{conv}"] = 2.0 * tau3 * printed(tau3)
            formulas[f"printed_tau3sq_lhs_{conv}"] = printed(tau3_sq)

    matched = None
    for name, val in formulas.items():
        if abs(val - slope) <= 1e-6 * max(1.0, abs(slope)):
            matched = name
            break
    return FirstOrderOracleResult(which, float(value0), float(slope), formulas, matched)


@dataclass(frozen=True)
class NoiseScenario:
    """Rank and weight data of the noise admixture entering the threshold and
    deviation estimates."""

    rank_r: int
    p_max: float
    p_min: float = 0.0
    delta_cap: float = 1.0

    def __post_init__(self):
        if self.rank_r < 2:
            raise ParameterError(f"rank_r must be >= 2, got {self.rank_r}")
        if not 0.0 < self.p_max <= 1.0:
            raise ParameterError(f"p_max must be in (0, 1], got {self.p_max}")
        if self.p_min > self.p_max:
            raise ParameterError("p_min must not exceed p_max")


def threshold_epsilon(s: NoiseScenario) -> float:
    """Noise fraction at which (1 - eps) = eps * p_max * (r - 1), beyond which
    the mixed-state entanglement must be expected to have dropped to zero."""
    return 1.0 / (1.0 + s.p_max * (s.rank_r - 1))


def deviation_bound(tau3: float, s: NoiseScenario, eps: float,
                    regime: str = "dominant") -> float:
    """First-order deviation estimate of the mixed-state tangle:
    -eps (tau3 + 24 (r-1) p_max) in the dominant regime, half that in the
    cross-over regime."""
    base = -eps * (tau3 + 24.0 * (s.rank_r - 1) * s.p_max)
    if regime == "dominant":
        return base
    if regime == "crossover":
        return 0.5 * base
    raise ParameterError(f"regime must be 'dominant' or 'crossover', got {regime!r}")


def affine_lower_bound(tau3: float, delta: float, eps: float) -> float:
    """Lower bound tau3 (1 - 2 delta eps) for the affine convex-roof regime,
    clamped at zero."""
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    if delta <= 0:
        raise ParameterError(f"delta must be > 0, got {delta}")
    return max(0.0, tau3 * (1.0 - 2.0 * delta * eps))


def ghzw_constants() -> tuple[float, float]:
    """Constants of the GHZ-W mixture family: the boundary weight
    p1 = 1/2 + (3/310) sqrt(465) and delta = p1 / (2 (1 - p1)) computed from
    it.  The exact delta is about 1.216, not the rounded 1.17 quoted
    alongside the closed form."""
    p1 = 0.5 + (3.0 / 310.0) * sqrt(465.0)
    delta = 0.5 * p1 / (1.0 - p1)
    return p1, delta


def noise_curve(psi: PureState, which: str, eps_grid, variant: str = "auto") -> list[dict]:
    """Rows (eps, formula_value, oracle_value, variant_id) over a noise grid.

    oracle_value is the exact contraction on the mixture (the squared-
    invariant scale); formula_value is the selected printed variant's
    first-order prediction on the same scale, or the numeric-slope line when
    no printed variant matches (variant='auto')."""
    res = first_order_oracle(psi, which)
    if variant == "auto":
        variant = res.matched_variant or "numeric_first_order"
    rows = []
    for eps in eps_grid:
        oracle_value = _contraction_on_mixture(psi, which, float(eps))
        if variant == "numeric_first_order":
            formula_value = res.value_at_zero + res.slope_numeric * float(eps)
        elif variant in res.formula_slopes:
            formula_value = res.value_at_zero + res.formula_slopes[variant] * float(eps)
        else:
            raise ParameterError(f"unknown variant {variant!r}")
        rows.append({"eps": float(eps), "formula_value": float(formula_value),
                     "oracle_value": float(oracle_value), "variant_id": variant})
    return rows


def write_noise_curve_csv(path, rows) -> None:
    lines = ["eps,formula_value,oracle_value,variant_id"]
    for r in rows:
        lines.append(f"{r['eps']!r},{r['formula_value']!r},{r['oracle_value']!r},{r['variant_id']}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
