r"""Gaussian states in the covariance-matrix formalism.

Quadratures are ordered as ``(q_1, p_1, ..., q_N, p_N)`` and normalised so
that the vacuum covariance matrix is the identity; a thermal mode with mean
photon number :math:`\bar n` has :math:`\sigma = (2\bar n + 1) I_2`.
Entropies are in nats.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError, NonPhysicalStateError

TOL_PHYS = 1e-9


def symplectic_form(n_modes):
    """Return the 2N x 2N symplectic form, a direct sum of [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise DomainError(f"n_modes must be positive, got {n_modes}")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _readonly(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _symplectic_spectrum(sigma):
    """Symplectic eigenvalues of ``sigma``, ascending, without any checks."""
    n = sigma.shape[0] // 2
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ sigma)))
    # eigenvalues of Omega.sigma come in pairs +-i nu
    return moduli[::2]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First moments ``d`` and covariance matrix ``sigma`` of an N-mode state.

    Construction symmetrises ``sigma`` and rejects states whose symplectic
    eigenvalues fall below ``1 - TOL_PHYS``. Arrays are stored read-only.
    """

    d: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        sigma = np.asarray(self.sigma, dtype=float)
        if d.size == 0 or d.size % 2:
            raise DimensionMismatchError(f"first-moment vector has length {d.size}")
        if sigma.shape != (d.size, d.size):
            raise DimensionMismatchError(
                f"covariance shape {sigma.shape} does not match {d.size} quadratures"
            )
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(sigma))):
            raise NonPhysicalStateError("state contains non-finite entries")
        sigma = 0.5 * (sigma + sigma.T)
        if np.linalg.eigvalsh(sigma)[0] <= 0:
            raise NonPhysicalStateError("covariance matrix is not positive definite")
        nu = _symplectic_spectrum(sigma)
        if nu[0] < 1 - TOL_PHYS:
            raise NonPhysicalStateError(
                f"smallest symplectic eigenvalue {nu[0]:.3e} is below 1"
            )
        object.__setattr__(self, "d", _readonly(d))
        object.__setattr__(self, "sigma", _readonly(sigma))

    @property
    def n_modes(self):
        return self.d.size // 2

    def mode(self, j):
        """Return the marginal state of mode ``j``."""
        if not 0 <= j < self.n_modes:
            raise DomainError(f"mode index {j} out of range for {self.n_modes} modes")
        sl = slice(2 * j, 2 * j + 2)
        return GaussianState(self.d[sl], self.sigma[sl, sl])

    def __repr__(self):
        return f"GaussianState(d={self.d.tolist()}, sigma={self.sigma.tolist()})"


def _check_nbar(nbar, name="nbar"):
    if not np.isfinite(nbar) or nbar < 0:
        raise DomainError(f"{name} must be a finite number >= 0, got {nbar}")


def thermal_state(nbars):
    """Product of thermal modes with the given mean photon numbers."""
    nbars = [float(n) for n in nbars]
    if not nbars:
        raise DomainError("at least one mode is required")
    for n in nbars:
        _check_nbar(n)
    diag = np.repeat([2 * n + 1 for n in nbars], 2)
    return GaussianState(np.zeros(2 * len(nbars)), np.diag(diag))


def displaced_thermal(nbar, q0, p0):
    """Single-mode thermal state displaced to first moments ``(q0, p0)``."""
    _check_nbar(nbar)
    return GaussianState([q0, p0], (2 * nbar + 1) * np.eye(2))


def vacuum(n_modes=1):
    return thermal_state([0.0] * n_modes)


def tensor(states):
    """Tensor product: concatenated first moments, direct-sum covariance."""
    states = list(states)
    if not states:
        raise DomainError("tensor of an empty list is undefined")
    d = np.concatenate([s.d for s in states])
    sigma = np.zeros((d.size, d.size))
    k = 0
    for s in states:
        m = s.d.size
        sigma[k:k + m, k:k + m] = s.sigma
        k += m
    return GaussianState(d, sigma)


def symplectic_eigenvalues(state):
    """Symplectic eigenvalues of the covariance matrix, ascending.

    Values in ``[1 - TOL_PHYS, 1)`` are clamped to 1.
    """
    nu = _symplectic_spectrum(np.asarray(state.sigma))
    if nu[0] < 1 - TOL_PHYS:
        raise NonPhysicalStateError(f"symplectic eigenvalue {nu[0]:.3e} < 1")
    return np.maximum(nu, 1.0)


def _thermal_entropy(x):
    # (x+1) ln(x+1) - x ln x, written to stay accurate for large x
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, np.log1p(safe) + safe * np.log1p(1.0 / safe), 0.0)


def thermal_entropy(nbar):
    """Entropy of a thermal mode, ``(n+1) ln(n+1) - n ln n``; 0 at ``n = 0``."""
    _check_nbar(nbar)
    return float(_thermal_entropy(nbar))


def entropy_from_symplectic(nu):
    """Sum of single-mode entropies for symplectic eigenvalues ``nu``."""
    return float(np.sum(_thermal_entropy((np.asarray(nu, dtype=float) - 1) / 2)))


def von_neumann_entropy(state):
    """Von Neumann entropy in nats, from the symplectic spectrum."""
    return entropy_from_symplectic(symplectic_eigenvalues(state))


def mean_photon_numbers(state):
    r"""Per-mode mean photon number :math:`\langle a_j^\dagger a_j\rangle`.

    For mode j this is ``(sigma_11 + sigma_22 + d_1**2 + d_2**2 - 2) / 4``
    evaluated on the mode's 2 x 2 block.
    """
    d = state.d.reshape(-1, 2)
    diag = np.diag(state.sigma).reshape(-1, 2)
    kbar = (diag.sum(axis=1) + (d ** 2).sum(axis=1) - 2) / 4
    # rounding can push a vacuum-like mode a hair below zero
    return np.maximum(kbar, 0.0)
