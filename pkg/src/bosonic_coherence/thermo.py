"""Entropy production of a channel followed by Markovian thermalization.

Units are hbar = omega = k_B = 1 and time is measured in units of the
reservoir timescale, so ``gamma`` is a pure number.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .channels import GcpMap, amplification, apply, attenuation, thermalization_map
from .errors import DomainError
from .gaussian import displaced_thermal, von_neumann_entropy

DEFAULT_R_MAX = 10.0
TOL_T = 1e-3


class EnergyConvention(enum.Enum):
    """How the mean energy of a Gaussian state is computed.

    ``COVARIANCE_ONLY`` uses ``Tr[sigma]/4``; ``FULL`` adds the first-moment
    energy ``|d|**2/4`` and equals ``<a^dag a> + 1/2`` per mode.
    """

    COVARIANCE_ONLY = "covariance"
    FULL = "full"


def beta_from_nbar(nbar):
    if not nbar > 0 or not math.isfinite(nbar):
        raise DomainError(f"Nbar must be > 0 to define a temperature, got {nbar}")
    return math.log1p(1.0 / nbar)


def nbar_from_beta(beta):
    if not beta > 0 or not math.isfinite(beta):
        raise DomainError(f"beta must be > 0, got {beta}")
    return 1.0 / math.expm1(beta)


@dataclass(frozen=True)
class ThermalReservoir:
    nbar: float
    gamma: float

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0:
            raise DomainError(f"Nbar must be >= 0, got {self.nbar}")
        if not math.isfinite(self.gamma) or self.gamma <= 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")

    @property
    def beta(self):
        return beta_from_nbar(self.nbar)


@dataclass(frozen=True)
class EntropyRecord:
    t: float
    delta_U: float
    delta_S: float
    sigma_prod: float


def internal_energy(state, convention=EnergyConvention.FULL):
    energy = float(np.trace(state.sigma)) / 4
    if EnergyConvention(convention) is EnergyConvention.FULL:
        energy += float(state.d @ state.d) / 4
    return energy


def thermalize(state, reservoir, t):
    """Evolve ``state`` for time ``t`` in contact with ``reservoir``, mode by mode."""
    gmap = thermalization_map(t, reservoir.gamma, reservoir.nbar)
    if state.n_modes > 1:
        n = state.n_modes
        gmap = GcpMap(np.kron(np.eye(n), gmap.F), np.kron(np.eye(n), gmap.G))
    return apply(gmap, state)


def entropy_production(state_tau1, reservoir, t, convention=EnergyConvention.FULL):
    """Entropy produced while ``state_tau1`` thermalizes for time ``t``."""
    beta = reservoir.beta
    state_tau2 = thermalize(state_tau1, reservoir, t)
    du = internal_energy(state_tau2, convention) - internal_energy(state_tau1, convention)
    ds = von_neumann_entropy(state_tau2) - von_neumann_entropy(state_tau1)
    return EntropyRecord(t, du, ds, -beta * du + ds)


def gibbs_free_energy(beta, n_modes=1):
    """Free energy of the Gibbs state of ``n_modes`` oscillators (zero point included)."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return n_modes * math.log(2 * math.sinh(beta / 2)) / beta


def relative_entropy_to_gibbs(state, beta, convention=EnergyConvention.FULL):
    """``beta (U - F_eq) - S``: relative entropy to the Gibbs state at ``beta``."""
    f_eq = gibbs_free_energy(beta, state.n_modes)
    return beta * (internal_energy(state, convention) - f_eq) - von_neumann_entropy(state)


def channel_output(family, ell, nbar, mbar, d0=(1.0, 1.0)):
    """State after sending a displaced thermal mode through the named channel.

    ``family`` is ``"att"`` (``ell`` is the angle theta) or ``"amp"`` (``ell``
    is the squeezing r).
    """
    state = displaced_thermal(nbar, *d0)
    if family == "att":
        return apply(attenuation(ell, mbar), state)
    if family == "amp":
        return apply(amplification(ell, mbar), state)
    raise DomainError(f"unknown channel family {family!r}")


def reference_parameter(family, r_max=DEFAULT_R_MAX):
    """Parameter value at which the channel output carries least coherence."""
    if family == "att":
        return math.pi / 2
    if family == "amp":
        return r_max
    raise DomainError(f"unknown channel family {family!r}")


def coherence_entropy_cost(
    family,
    ell,
    reservoir,
    t,
    *,
    nbar,
    mbar,
    d0=(1.0, 1.0),
    convention=EnergyConvention.FULL,
    r_max=DEFAULT_R_MAX,
):
    """Extra entropy production at parameter ``ell`` relative to the least coherent output.

    For the amplifier the reference (infinite gain) is replaced by ``r_max``.
    """
    ell0 = reference_parameter(family, r_max)

    def run(x):
        out = channel_output(family, x, nbar, mbar, d0)
        return entropy_production(out, reservoir, t, convention).sigma_prod

    return run(ell) - run(ell0)


def _thermalized(state, reservoir, t, tol):
    gamma = reservoir.gamma
    eq = 2 * reservoir.nbar + 1
    sigma_dev = math.exp(-gamma * t) * np.abs(state.sigma - eq * np.eye(state.sigma.shape[0]))
    d_norm = math.exp(-gamma * t / 2) * float(np.linalg.norm(state.d))
    return float(np.max(sigma_dev)) < tol and d_norm < tol


def thermalization_time(state, reservoir, tol=1e-6):
    """Shortest time after which the state is within ``tol`` of equilibrium.

    Doubles ``t`` from ``1/gamma`` until the criterion holds, then bisects
    down to a resolution of ``TOL_T``.
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if _thermalized(state, reservoir, 0.0, tol):
        return 0.0
    lo, hi = 0.0, 1.0 / reservoir.gamma
    while not _thermalized(state, reservoir, hi, tol):
        lo, hi = hi, 2 * hi
    while hi - lo > TOL_T:
        mid = 0.5 * (lo + hi)
        if _thermalized(state, reservoir, mid, tol):
            hi = mid
        else:
            lo = mid
    return hi
