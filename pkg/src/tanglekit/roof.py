"""Numerical upper bounds on the convex-roof three-tangle of low-rank
three-qubit mixed states.

Any size-m decomposition of rho is generated by an m x r column-orthonormal
matrix applied to the weighted eigenvectors; the average tangle is minimized
over that Stiefel manifold by a derivative-free pattern search on Givens
rotation angles (with phases), restarted from Haar-random points.  The best
value found is a certified upper bound on the roof.

The average tangle of a decomposition row Phi_i = (U W)_i reduces, by the
degree-4 homogeneity of the tangle polynomial, to
|poly(Phi_i)| / <Phi_i|Phi_i>, and both pieces are quadratic forms in the
conjugated U row once the weighted eigenvectors W are folded in.  All inner
loops therefore run in rank-r dimension, not in the 8-dimensional Hilbert
space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .qubits import DensityMatrix, PAULIS, PureState, ghz_state, w_state
from .invariants import COMB_METRIC

RANK_TOL = 1e-10
VANISH_TOL = 1e-3

_TANGLE_WEIGHTS = tuple((mu, COMB_METRIC[mu, mu]) for mu in (0, 1, 3))


def _tangle_matrix(mu: int) -> np.ndarray:
    return np.kron(PAULIS[mu], np.kron(PAULIS[2], PAULIS[2]))


class _RoofObjective:
    """Average-tangle objective in the rank-reduced representation."""

    def __init__(self, w: np.ndarray):
        self.w = w
        wbar = w.conj()
        # poly(Phi_i) = sum_mu g_mu (ubar_i B_mu ubar_i^T)^2 with u_i the row of U
        self.b_mats = np.stack([wbar @ _tangle_matrix(mu) @ wbar.T
                                for mu, _ in _TANGLE_WEIGHTS])
        self.g = np.array([g for _, g in _TANGLE_WEIGHTS])
        self.n_mat = w @ w.conj().T  # <Phi_i|Phi_i> = u_i N u_i^dagger

    def row_terms(self, u_rows: np.ndarray) -> np.ndarray:
        """|poly| / squared-norm for each row of a (k, r) block of U."""
        ub = u_rows.conj()
        a = (np.matmul(ub, self.b_mats) * ub).sum(-1)  # (3, k)
        poly = self.g @ (a * a)
        norm2 = ((u_rows @ self.n_mat) * ub).sum(-1).real
        out = np.zeros(u_rows.shape[0])
        ok = norm2 > 1e-14
        out[ok] = np.abs(poly[ok]) / norm2[ok]
        return out


@dataclass(frozen=True)
class Decomposition:
    """Weighted pure-state decomposition of a density matrix together with
    the column-orthonormal generator that produced it."""

    vectors: list
    generator: np.ndarray

    def reconstruction(self, n_qubits: int) -> np.ndarray:
        d = 2 ** n_qubits
        rho = np.zeros((d, d), dtype=complex)
        for v in self.vectors:
            rho += np.outer(v.amplitudes, v.amplitudes.conj())
        return rho


@dataclass(frozen=True)
class RoofResult:
    upper_bound: float
    best_decomposition: Decomposition
    restarts_used: int
    converged: bool


def _weighted_eigvecs(rho: DensityMatrix) -> np.ndarray:
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > RANK_TOL
    w = vecs[:, keep] * np.sqrt(vals[keep])
    return w.T[::-1].copy()  # rows, largest weight first


def _haar_stiefel(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(z)
    return q * (np.diag(rr) / np.abs(np.diag(rr)))


_PHASES = np.exp(1j * np.arange(8) * (np.pi / 4))
_N_CAND = 4 * len(_PHASES)  # two signs x two magnitudes per phase


def _candidate_rows(ui: np.ndarray, uj: np.ndarray, step: float) -> np.ndarray:
    """Stacked (2 * n_cand, r) rows after Givens rotations by +-step and
    +-step/3 with all trial phases; candidates c and c + n_cand pair up."""
    thetas = np.concatenate([np.full(len(_PHASES), sgn * mag)
                             for mag in (step, step / 3) for sgn in (1.0, -1.0)])
    phases = np.tile(_PHASES, 4)
    c, s = np.cos(thetas)[:, None], np.sin(thetas)[:, None]
    ph = phases[:, None]
    new_i = c * ui - ph * s * uj
    new_j = np.conj(ph) * s * ui + c * uj
    return np.vstack([new_i, new_j])


def _pattern_search(obj: _RoofObjective, u0: np.ndarray, max_sweeps: int,
                    step_min: float = 1e-4, stop_below: float | None = None,
                    step0: float = 0.5) -> tuple[float, np.ndarray, bool]:
    m = u0.shape[0]
    u = u0.copy()
    terms = obj.row_terms(u)
    total = float(np.sum(terms))
    step = step0
    converged = False
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        if stop_below is not None and total < stop_below:
            converged = True
            break
        sweep_gain = 0.0
        for i, j in pairs:
            base = terms[i] + terms[j]
            if base < 1e-16:
                continue
            cand = _candidate_rows(u[i], u[j], step)
            vals = obj.row_terms(cand)
            pair_tot = vals[:_N_CAND] + vals[_N_CAND:]
            best = int(np.argmin(pair_tot))
            gain = base - pair_tot[best]
            if gain > 1e-14:
                u[i] = cand[best]
                u[j] = cand[_N_CAND + best]
                terms[i] = vals[best]
                terms[j] = vals[_N_CAND + best]
                total -= gain
                sweep_gain += gain
        # shrink once a sweep stops paying at the current angular scale
        if sweep_gain < 1e-3 * step * step:
            step *= 0.5
            if step < step_min:
                converged = True
                break
    total = float(np.sum(obj.row_terms(u)))
    return total, u, converged


def roof_upper_bound(rho: DensityMatrix, m: int, restarts: int, seed: int,
                     stop_below: float | None = None,
                     max_sweeps: int = 400) -> RoofResult:
    """Best decomposition average tangle found over multi-start pattern
    search; a certified upper bound on the convex roof.

    The trivial eigendecomposition seeds the search, so the returned bound
    never exceeds the eigendecomposition average.  stop_below, when given,
    ends the restart loop once the bound falls under it (restarts run in
    fixed index order, so results stay deterministic in (seed, restarts)).
    """
    if rho.n_qubits != 3:
        raise ParameterError(f"roof estimation is implemented for n=3, got n={rho.n_qubits}")
    w = _weighted_eigvecs(rho)
    r = w.shape[0]
    if m < r:
        raise ParameterError(f"decomposition size m={m} below rank r={r}")
    obj = _RoofObjective(w)

    u_trivial = np.zeros((m, r), dtype=complex)
    u_trivial[:r, :] = np.eye(r)
    best_val, best_u, best_conv = _pattern_search(obj, u_trivial, max_sweeps,
                                                  stop_below=stop_below)
    used = 0
    for k in range(restarts):
        if stop_below is not None and best_val < stop_below:
            break
        used = k + 1
        rng = np.random.default_rng([seed, k])
        val, u, conv = _pattern_search(obj, _haar_stiefel(m, r, rng), max_sweeps,
                                       stop_below=stop_below)
        if val < best_val:
            best_val, best_u, best_conv = val, u, conv
    if not np.isfinite(best_val):
        raise NumericalError("roof optimizer produced a non-finite bound")
    phi = best_u @ w
    vectors = [PureState(3, row) for row in phi if np.linalg.norm(row) > 1e-9]
    deco = Decomposition(vectors, best_u)
    return RoofResult(float(best_val), deco, used, best_conv)


def ghzw_mixture(eps: float) -> DensityMatrix:
    """(1 - eps) |GHZ><GHZ| + eps |W><W|; rank <= 2."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps}")
    g, wv = ghz_state(3).amplitudes, w_state().amplitudes
    m = (1.0 - eps) * np.outer(g, g.conj()) + eps * np.outer(wv, wv.conj())
    return DensityMatrix(3, m)


def vanish_threshold_scan(family: str, grid, m: int, restarts: int, seed: int,
                          rho_builder=None) -> list[tuple[float, float]]:
    """Roof upper bounds over an ascending noise grid for a mixture family
    ('ghzw' or 'white_noise' on GHZ, or a custom rho_builder)."""
    from .qubits import white_noise_mix

    grid = [float(e) for e in grid]
    if sorted(grid) != grid or (grid and not (0.0 <= grid[0] and grid[-1] <= 1.0)):
        raise ParameterError("grid must be ascending within [0, 1]")
    if rho_builder is None:
        if family == "ghzw":
            rho_builder = ghzw_mixture
        elif family == "white_noise":
            rho_builder = lambda e: white_noise_mix(ghz_state(3), e)
        else:
            raise ParameterError(f"family must be 'ghzw' or 'white_noise', got {family!r}")
    out = []
    for idx, eps in enumerate(grid):
        point_seed = int(np.random.SeedSequence([seed, idx]).generate_state(1)[0])
        res = roof_upper_bound(rho_builder(eps), m, restarts, point_seed,
                               stop_below=VANISH_TOL / 10)
        out.append((eps, res.upper_bound))
    return out


def vanish_threshold(scan_rows, tol: float = VANISH_TOL) -> float | None:
    """Smallest grid noise fraction whose upper bound is below tol."""
    for eps, bound in scan_rows:
        if bound < tol:
            return eps
    return None


def write_roof_scan_csv(path, rows, restarts: int, m: int, converged: bool = True) -> None:
    lines = ["eps,upper_bound,restarts,m,converged"]
    for eps, bound in rows:
        lines.append(f"{eps!r},{bound!r},{restarts},{m},{converged}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
