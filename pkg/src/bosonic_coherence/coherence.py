r"""Relative entropy of coherence of Gaussian states in the Fock basis.

The closest incoherent state to a Gaussian state is the product of thermal
modes with the same mean photon numbers, so the coherence is
:math:`C(\rho) = S(\zeta) - S(\rho)` with :math:`\zeta` that thermal state.
Besides the generic route, closed forms for a displaced thermal input sent
through attenuation or amplification channels are provided.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import xlogy

from .errors import DimensionMismatchError, DomainError
from .gaussian import (
    _thermal_entropy,
    mean_photon_numbers,
    thermal_state,
    von_neumann_entropy,
)

INCOHERENCE_TOL = 1e-9


@dataclass(frozen=True)
class CoherenceReport:
    kbars: tuple
    entropy_state: float
    entropy_reference: float
    coherence: float


def reference_thermal(state):
    """Incoherent (thermal) state with the same per-mode mean photon numbers."""
    return thermal_state(mean_photon_numbers(state))


def coherence(state):
    kbars = mean_photon_numbers(state)
    s_ref = float(np.sum(_thermal_entropy(kbars)))
    s_state = von_neumann_entropy(state)
    return CoherenceReport(tuple(float(k) for k in kbars), s_state, s_ref, s_ref - s_state)


def is_incoherent(state, tol=INCOHERENCE_TOL):
    """True when the state is a product of thermal modes, up to ``tol``."""
    if np.max(np.abs(state.d)) > tol:
        return False
    sigma = state.sigma
    diag = np.diag(sigma)
    off = sigma - np.diag(diag)
    if np.max(np.abs(off)) > tol:
        return False
    return bool(np.all(np.abs(diag[0::2] - diag[1::2]) <= tol))


def _check(**values):
    for name, v in values.items():
        if not math.isfinite(v) or v < 0:
            raise DomainError(f"{name} must be a finite number >= 0, got {v}")


def _closed_form(a, b):
    # (A-1)/2 ln((A-1)/2) - (A+1)/2 ln((A+1)/2) + B ln B - (B-1) ln(B-1),
    # grouped as two thermal entropies so that large A, B do not cancel badly
    return float(_thermal_entropy(b - 1) - _thermal_entropy((a - 1) / 2))


def coherence_att_closed_form(nbar, mbar, theta, q0, p0):
    """Coherence of a displaced thermal state after the attenuation channel."""
    _check(nbar=nbar, mbar=mbar)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    a = (2 * nbar + 1) * c2 + (2 * mbar + 1) * s2
    b = a / 2 + ((q0 ** 2 + p0 ** 2) * c2 - 2) / 4 + 1
    return _closed_form(a, b)


def coherence_amp_closed_form(nbar, mbar, r, q0, p0):
    """Coherence of a displaced thermal state after the amplification channel."""
    _check(nbar=nbar, mbar=mbar, r=r)
    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    a = (2 * nbar + 1) * ch2 + (2 * mbar + 1) * sh2
    b = a / 2 + ((q0 ** 2 + p0 ** 2) * ch2 - 2) / 4 + 1
    return _closed_form(a, b)


def coherence_amp_limit_r0(nbar, q0, p0):
    """Small-gain limit of the amplifier coherence, i.e. the input coherence."""
    _check(nbar=nbar)
    s = q0 ** 2 + p0 ** 2
    return float(
        xlogy(nbar, nbar)
        - xlogy(nbar + 1, nbar + 1)
        + xlogy(nbar + 1 + s / 4, s + 4 * nbar + 4)
        - xlogy(nbar + s / 4, s + 4 * nbar)
        - 2 * math.log(2)
    )


def coherence_amp_limit_rinf(nbar, mbar, q0, p0):
    """Large-gain asymptote of the amplifier coherence."""
    _check(nbar=nbar, mbar=mbar)
    total = nbar + mbar + 1
    return math.log(q0 ** 2 + p0 ** 2 + 4 * total) - math.log(total) - 2 * math.log(2)


def _nmode(nbars, mbars, d0, c2, s2):
    nbars = np.asarray(nbars, dtype=float)
    mbars = np.asarray(mbars, dtype=float)
    d0 = np.asarray(d0, dtype=float).reshape(-1, 2) if len(d0) else np.empty((0, 2))
    if not (nbars.shape == mbars.shape and len(d0) == nbars.size) or nbars.ndim != 1:
        raise DimensionMismatchError(
            f"got {nbars.size} nbars, {mbars.size} mbars and {len(d0)} displacements"
        )
    if nbars.size == 0:
        raise DomainError("at least one mode is required")
    for n, m in zip(nbars, mbars):
        _check(nbar=n, mbar=m)
    nu = (2 * nbars + 1) * c2 + (2 * mbars + 1) * s2
    kbar = nu / 2 + (c2 * (d0 ** 2).sum(axis=1) - 2) / 4
    entropy = np.sum(_thermal_entropy((nu - 1) / 2))
    return float(np.sum(_thermal_entropy(kbar)) - entropy)


def coherence_att_nmode(nbars, mbars, theta, d0):
    """Coherence of a product of displaced thermal modes, each attenuated.

    ``d0`` is a sequence of per-mode ``(q, p)`` pairs.
    """
    return _nmode(nbars, mbars, d0, math.cos(theta) ** 2, math.sin(theta) ** 2)


def coherence_amp_nmode(nbars, mbars, r, d0):
    """Coherence of a product of displaced thermal modes, each amplified."""
    _check(r=r)
    return _nmode(nbars, mbars, d0, math.cosh(r) ** 2, math.sinh(r) ** 2)
