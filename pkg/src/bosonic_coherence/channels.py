"""Gaussian completely positive (GCP) maps acting as d -> F d, sigma -> F sigma F^T + G."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import CPViolationError, DimensionMismatchError, DomainError
from .gaussian import GaussianState, symplectic_form

TOL_CP = 1e-9


@dataclass(frozen=True, eq=False)
class GcpMap:
    """A Gaussian map given by the real 2N x 2N matrices ``F`` and ``G``.

    ``G`` is symmetrised on construction. Complete positivity is not
    enforced here; use :func:`validate_cp` (``apply`` and ``compose`` do).
    """

    F: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float)
        G = np.array(self.G, dtype=float)
        if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] % 2 or F.shape != G.shape:
            raise DimensionMismatchError(f"F {F.shape} and G {G.shape} must be equal 2N x 2N")
        G = 0.5 * (G + G.T)
        F.setflags(write=False)
        G.setflags(write=False)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "G", G)

    @property
    def n_modes(self):
        return self.F.shape[0] // 2

    def __repr__(self):
        return f"GcpMap(F={self.F.tolist()}, G={self.G.tolist()})"


@dataclass(frozen=True)
class CPCheck:
    """Outcome of :func:`validate_cp`."""

    ok: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.ok


def identity_map(n_modes=1):
    dim = 2 * n_modes
    return GcpMap(np.eye(dim), np.zeros((dim, dim)))


def validate_cp(gmap):
    """Check ``G + i Omega - i F Omega F^T >= 0`` up to ``TOL_CP``."""
    omega = symplectic_form(gmap.n_modes)
    herm = gmap.G + 1j * omega - 1j * gmap.F @ omega @ gmap.F.T
    lam = float(np.linalg.eigvalsh(herm)[0])
    return CPCheck(lam >= -TOL_CP, lam)


def _require_cp(gmap):
    check = validate_cp(gmap)
    if not check.ok:
        raise CPViolationError(
            f"map is not completely positive (min eigenvalue {check.min_eigenvalue:.6g})",
            check.min_eigenvalue,
        )


def apply(gmap, state):
    """Act with ``gmap`` on ``state``."""
    if gmap.n_modes != state.n_modes:
        raise DimensionMismatchError(
            f"map acts on {gmap.n_modes} modes, state has {state.n_modes}"
        )
    _require_cp(gmap)
    F = gmap.F
    return GaussianState(F @ state.d, F @ state.sigma @ F.T + gmap.G)


def compose(outer, inner):
    """The map ``outer o inner``: ``inner`` acts first."""
    if outer.n_modes != inner.n_modes:
        raise DimensionMismatchError(
            f"cannot compose maps on {outer.n_modes} and {inner.n_modes} modes"
        )
    Fo = outer.F
    out = GcpMap(Fo @ inner.F, Fo @ inner.G @ Fo.T + outer.G)
    _require_cp(out)
    return out


def _check_nonneg(value, name):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be a finite number >= 0, got {value}")


def _single(f, g):
    return GcpMap(f * np.eye(2), g * np.eye(2))


def attenuation(theta, mbar):
    """Thermal attenuator with transmissivity ``cos(theta)**2`` and environment ``mbar``."""
    _check_nonneg(mbar, "mbar")
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    theta = math.fmod(theta, 2 * math.pi)
    return _single(math.cos(theta), (2 * mbar + 1) * math.sin(theta) ** 2)


def amplification(r, mbar):
    """Thermal amplifier with gain ``cosh(r)**2`` and environment ``mbar``."""
    _check_nonneg(r, "r")
    _check_nonneg(mbar, "mbar")
    return _single(math.cosh(r), (2 * mbar + 1) * math.sinh(r) ** 2)


def quantum_limited_attenuator(theta):
    return attenuation(theta, 0.0)


def quantum_limited_amplifier(r):
    return amplification(r, 0.0)


def phase_insensitive(theta, r):
    """Quantum-limited attenuator followed by the quantum-limited amplifier."""
    _check_nonneg(r, "r")
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    theta = math.fmod(theta, 2 * math.pi)
    ch, c, s = math.cosh(r), math.cos(theta), math.sin(theta)
    return _single(ch * c, ch ** 2 * s ** 2 + math.sinh(r) ** 2)


def thermalization_map(t, gamma, nbar):
    """Exact solution of the thermal Lindblad equation after time ``t``.

    ``t`` may be ``math.inf`` for complete thermalization.
    """
    if math.isnan(t) or t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if not math.isfinite(gamma) or gamma <= 0:
        raise DomainError(f"gamma must be a finite number > 0, got {gamma}")
    _check_nonneg(nbar, "Nbar")
    decay = math.exp(-gamma * t)
    return _single(math.exp(-gamma * t / 2), (2 * nbar + 1) * (1 - decay))


def embed_single_mode(gmap, j, n_modes):
    """Act with a one-mode map on mode ``j`` of ``n_modes``, identity elsewhere."""
    if gmap.n_modes != 1:
        raise DimensionMismatchError("only single-mode maps can be embedded")
    if not 0 <= j < n_modes:
        raise DomainError(f"mode index {j} out of range for {n_modes} modes")
    F = np.eye(2 * n_modes)
    G = np.zeros((2 * n_modes, 2 * n_modes))
    sl = slice(2 * j, 2 * j + 2)
    F[sl, sl] = gmap.F
    G[sl, sl] = gmap.G
    return GcpMap(F, G)
