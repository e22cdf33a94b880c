"""Truncated Fock-space oracle used to cross-check the Gaussian formulas.

Dense matrices throughout; this module favours transparency over speed.
Quadratures are ``q = a + a^dag`` and ``p = -i (a - a^dag)``, which gives a
vacuum covariance of one and places ``D(alpha)`` at ``alpha = (q0 + i p0)/2``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .errors import BoundaryMinimumError, DomainError, TruncationError

TRACE_LOSS_TOL = 1e-6
EIG_FLOOR = 1e-15


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    """A density matrix on the first ``dim`` number states.

    ``trace_loss`` records the probability cut off by the truncation.
    """

    matrix: np.ndarray
    trace_loss: float = 0.0

    @property
    def dim(self):
        return self.matrix.shape[0]


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)


def thermal_dm(nbar, dim):
    if nbar < 0:
        raise DomainError(f"nbar must be >= 0, got {nbar}")
    if dim < 2:
        raise DomainError(f"dim must be >= 2, got {dim}")
    n = np.arange(dim)
    if nbar == 0:
        probs = (n == 0).astype(float)
    else:
        probs = np.exp(n * np.log(nbar / (nbar + 1)) - np.log1p(nbar))
    return FockDensityMatrix(np.diag(probs).astype(complex), float(1 - probs.sum()))


def displacement_operator(alpha, dim, pad=None):
    """``D(alpha)`` on ``dim`` levels, built in a padded space then cropped."""
    if pad is None:
        pad = 60 + int(20 * abs(alpha) ** 2)
    a = annihilation(dim + pad)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm(gen)[:dim, :dim]


def displacement_dm(state_dm, q0, p0, dim=None):
    """Displace ``state_dm`` to first moments ``(q0, p0)``.

    Probability pushed above the cutoff is lost; :class:`TruncationError` is
    raised when that loss exceeds ``TRACE_LOSS_TOL``.
    """
    dim = state_dm.dim if dim is None else dim
    rho = np.zeros((dim, dim), dtype=complex)
    k = min(dim, state_dm.dim)
    rho[:k, :k] = state_dm.matrix[:k, :k]
    D = displacement_operator((q0 + 1j * p0) / 2, dim)
    out = D @ rho @ D.conj().T
    out = 0.5 * (out + out.conj().T)
    loss = 1.0 - float(np.real(np.trace(out)))
    if loss > TRACE_LOSS_TOL:
        raise TruncationError(f"truncation at dim={dim} loses {loss:.2e} of the trace")
    return FockDensityMatrix(out, loss)


def displaced_thermal_dm(nbar, q0, p0, dim):
    return displacement_dm(thermal_dm(nbar, dim), q0, p0, dim)


def mean_photon_number_fock(dm):
    n = np.arange(dm.dim)
    return float(np.real(np.sum(n * np.diag(dm.matrix))))


def quadrature_means_fock(dm):
    a = annihilation(dm.dim)
    q = a + a.conj().T
    p = -1j * (a - a.conj().T)
    return (float(np.real(np.trace(dm.matrix @ q))), float(np.real(np.trace(dm.matrix @ p))))


def vn_entropy_fock(dm):
    lam = np.linalg.eigvalsh(dm.matrix)
    lam = lam[lam >= EIG_FLOOR]
    return float(-np.sum(lam * np.log(lam)))


def _log_matrix(dm):
    m = dm.matrix
    if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
        w = np.real(np.diag(m))
        if np.any(w <= 0):
            raise DomainError("reference state is rank deficient")
        return np.diag(np.log(w))
    w, v = np.linalg.eigh(m)
    if np.any(w <= 0):
        raise DomainError("reference state is rank deficient")
    return (v * np.log(w)) @ v.conj().T


def relative_entropy_fock(rho, zeta):
    """``Tr[rho ln rho] - Tr[rho ln zeta]`` for a full-rank ``zeta``."""
    if rho.dim != zeta.dim:
        raise DomainError(f"dimensions differ: {rho.dim} vs {zeta.dim}")
    cross = float(np.real(np.trace(rho.matrix @ _log_matrix(zeta))))
    return -vn_entropy_fock(rho) - cross


def coherence_by_minimization(dm, kbar_grid, tol=1e-6):
    """Minimise the relative entropy to thermal states over their photon number.

    Scans ``kbar_grid`` (all entries > 0), then refines the best bracket by
    golden-section search. Returns ``(coherence, argmin_kbar)``.
    """
    grid = np.asarray(kbar_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("kbar_grid needs at least 3 increasing positive values")

    def objective(k):
        return relative_entropy_fock(dm, thermal_dm(k, dm.dim))

    values = np.array([objective(k) for k in grid])
    i = int(np.argmin(values))
    if i == 0 or i == grid.size - 1:
        raise BoundaryMinimumError(f"minimum at grid end kbar={grid[i]}; widen the grid")
    res = minimize_scalar(
        objective,
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        options={"xtol": tol / max(grid[i], 1.0)},
    )
    return float(res.fun), float(res.x)
