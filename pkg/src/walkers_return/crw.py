"""One-dimensional correlated (persistent) random walk.

The step direction depends on the previous direction through a
column-stochastic 2x2 transition matrix A = [[a, b], [c, d]] with
a + c = b + d = 1: a is the probability of repeating a left step, d of
repeating a right step.  The state tracked per position is the pair of
masses whose last step was Left / Right, so the total at a position is the
occupation probability.

Routes to the return probability: exact mass evolution
(:func:`simulate_return_crw`), the Legendre closed form
(:func:`return_closed_crw`), and the explicit path-count sum
(:func:`return_sum_form_crw`) used as a verification path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import ReturnSeries
from .specfun import binom, scaled_legendre_pair

__all__ = [
    "TransitionMatrix",
    "CRWInitialState",
    "ProbabilityField",
    "CRWClosedFormParams",
    "RW_THRESHOLD",
    "crw_step",
    "evolve_crw",
    "simulate_return_crw",
    "closed_form_params",
    "return_closed_crw",
    "return_series_crw",
    "return_sum_form_crw",
]

# |ad - bc| below this is classified as the uncorrelated (plain random walk)
# degeneration; both closed-form branches agree in the limit, the threshold
# only selects which formula evaluates.
RW_THRESHOLD = 1e-14

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class TransitionMatrix:
    """Column-stochastic coin: a, b stored, c = 1 - a and d = 1 - b derived.

    The persistence parameters are p = a (keep going left) and q = d (keep
    going right); interior values 0 < a, d < 1 are required, which keeps
    every entry strictly inside (0, 1).
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"a must lie strictly inside (0, 1), got {self.a}")
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"d = 1 - b must lie strictly inside (0, 1), got b = {self.b}")

    @property
    def c(self) -> float:
        return 1.0 - self.a

    @property
    def d(self) -> float:
        return 1.0 - self.b

    @property
    def p(self) -> float:
        return self.a

    @property
    def q(self) -> float:
        return self.d

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @classmethod
    def from_persistence(cls, p: float, q: float) -> "TransitionMatrix":
        return cls(a=p, b=1.0 - q)

    @classmethod
    def uncorrelated(cls, p: float) -> "TransitionMatrix":
        """Move left with probability p regardless of history (a = b = p)."""
        return cls(a=p, b=p)

    @classmethod
    def symmetric(cls) -> "TransitionMatrix":
        return cls(a=0.5, b=0.5)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "TransitionMatrix":
        return cls(a=rng.uniform(0.05, 0.95), b=rng.uniform(0.05, 0.95))


@dataclass(frozen=True)
class CRWInitialState:
    """Distribution over the direction of the (virtual) previous step."""

    phi1_hat: float
    phi2_hat: float

    def __post_init__(self) -> None:
        if self.phi1_hat < 0.0 or self.phi2_hat < 0.0:
            raise ValueError("initial weights must be non-negative")
        total = self.phi1_hat + self.phi2_hat
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"initial weights must sum to 1, got {total}")

    def vector(self) -> np.ndarray:
        return np.array([self.phi1_hat, self.phi2_hat])

    @classmethod
    def from_phi1(cls, phi1_hat: float) -> "CRWInitialState":
        return cls(phi1_hat=phi1_hat, phi2_hat=1.0 - phi1_hat)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "CRWInitialState":
        return cls.from_phi1(rng.uniform(0.0, 1.0))


@dataclass(frozen=True)
class ProbabilityField:
    """Conditional occupation masses at one time step.

    Column j of `masses` holds (mass with last step Left, last step Right)
    at position x = j - time; layout mirrors the quantum AmplitudeField.
    """

    time: int
    masses: np.ndarray  # float64 of shape (2, 2*time + 1)

    @classmethod
    def from_state(cls, phi_hat: CRWInitialState) -> "ProbabilityField":
        masses = np.zeros((2, 1))
        masses[:, 0] = phi_hat.vector()
        return cls(time=0, masses=masses)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.time, self.time + 1)

    def mass(self, x: int) -> float:
        if abs(x) > self.time:
            return 0.0
        return float(self.masses[0, x + self.time] + self.masses[1, x + self.time])

    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def position_distribution(self) -> np.ndarray:
        return self.masses[0] + self.masses[1]


def crw_step(field: ProbabilityField, transition: TransitionMatrix) -> ProbabilityField:
    """One time step: L-mass flows one unit left, R-mass one unit right."""
    a, b = transition.a, transition.b
    c, d = transition.c, transition.d
    t = field.time
    new = np.zeros((2, 2 * t + 3))
    new[0, : 2 * t + 1] = a * field.masses[0] + b * field.masses[1]
    new[1, 2:] = c * field.masses[0] + d * field.masses[1]
    return ProbabilityField(time=t + 1, masses=new)


def evolve_crw(transition: TransitionMatrix, phi_hat: CRWInitialState, n: int) -> ProbabilityField:
    if n < 0:
        raise ValueError(f"step count must be non-negative, got {n}")
    field = ProbabilityField.from_state(phi_hat)
    for _ in range(n):
        field = crw_step(field, transition)
    return field


def simulate_return_crw(
    transition: TransitionMatrix, phi_hat: CRWInitialState, nmax: int
) -> ReturnSeries:
    """Return probabilities r_0..r_nmax by direct mass evolution."""
    if nmax < 0:
        raise ValueError(f"nmax must be non-negative, got {nmax}")
    values = np.empty(nmax + 1)
    field = ProbabilityField.from_state(phi_hat)
    values[0] = field.mass(0)
    for n in range(1, nmax + 1):
        field = crw_step(field, transition)
        values[n] = field.mass(0)
    return ReturnSeries(
        model="crw",
        values=values,
        params={"a": transition.a, "b": transition.b, "phi1_hat": phi_hat.phi1_hat},
    )


@dataclass(frozen=True)
class CRWClosedFormParams:
    """Scalars of the closed form: delta_pm = ad +- bc, k_pm = ac phi1 + bd phi2 +- ad."""

    delta_plus: float
    delta_minus: float
    k_plus: float
    k_minus: float

    @property
    def is_random_walk(self) -> bool:
        return abs(self.delta_minus) < RW_THRESHOLD


def closed_form_params(
    transition: TransitionMatrix, phi_hat: CRWInitialState
) -> CRWClosedFormParams:
    a, b, c, d = transition.a, transition.b, transition.c, transition.d
    s = a * c * phi_hat.phi1_hat + b * d * phi_hat.phi2_hat
    return CRWClosedFormParams(
        delta_plus=a * d + b * c,
        delta_minus=a * d - b * c,
        k_plus=s + a * d,
        k_minus=s - a * d,
    )


def _closed_even(transition: TransitionMatrix, params: CRWClosedFormParams, j: int) -> float:
    """Closed-form r_{2j} for one transition matrix."""
    if params.is_random_walk:
        # Uncorrelated degeneration: move left w.p. p = a each step.
        p = transition.a
        return (p * (1.0 - p)) ** j * binom(2 * j, j)
    # delta_minus^j P_j(delta_plus/delta_minus) evaluated jointly: the
    # Legendre argument exceeds 1 in magnitude and P_j alone overflows.
    t_lo, t_hi = scaled_legendre_pair(j, params.delta_plus, params.delta_minus)
    ad2 = params.k_plus - params.k_minus  # equals 2ad
    return (params.k_minus * params.delta_minus * t_lo + params.k_plus * t_hi) / ad2


def return_closed_crw(
    transition: TransitionMatrix, phi_hat: CRWInitialState, n: int
) -> float:
    """Legendre closed form for the return probability at time n.

    r_{2j} = (delta_minus^j / 2ad) (k_minus P_{j-1}(y) + k_plus P_j(y))
    with y = delta_plus/delta_minus; when |delta_minus| vanishes the walk
    is an uncorrelated random walk and r_{2j} = (p(1-p))^j C(2j, j).
    """
    if n < 0:
        raise ValueError(f"time must be non-negative, got {n}")
    if n == 0:
        return 1.0
    if n % 2 == 1:
        return 0.0
    return _closed_even(transition, closed_form_params(transition, phi_hat), n // 2)


def return_series_crw(
    transition: TransitionMatrix, phi_hat: CRWInitialState, nmax: int
) -> ReturnSeries:
    """Closed-form return series r_0..r_nmax in one recurrence sweep."""
    if nmax < 0:
        raise ValueError(f"nmax must be non-negative, got {nmax}")
    params = closed_form_params(transition, phi_hat)
    values = np.zeros(nmax + 1)
    values[0] = 1.0
    if params.is_random_walk:
        p = transition.a
        pq = p * (1.0 - p)
        for j in range(1, nmax // 2 + 1):
            values[2 * j] = pq**j * binom(2 * j, j)
    else:
        dplus, dminus = params.delta_plus, params.delta_minus
        ad2 = params.k_plus - params.k_minus
        d2 = dminus * dminus
        t_prev, t = 1.0, dplus  # T_0, T_1 of the scaled recurrence
        for j in range(1, nmax // 2 + 1):
            values[2 * j] = (params.k_minus * dminus * t_prev + params.k_plus * t) / ad2
            t_prev, t = t, ((2 * j + 1) * dplus * t - j * d2 * t_prev) / (j + 1)
    return ReturnSeries(
        model="crw",
        values=values,
        params={"a": transition.a, "b": transition.b, "phi1_hat": phi_hat.phi1_hat},
    )


def return_sum_form_crw(
    transition: TransitionMatrix, phi_hat: CRWInitialState, n: int
) -> float:
    """Return probability at time 2n via the explicit binomial path count.

    (ad)^n sum_g (bc/ad)^g C(n-1, g-1)^2
        { (n/g)(s/ad + 1) + ((ad - bc)/(abcd)) s },  s = ac phi1 + bd phi2.

    All terms are positive, so plain floating summation is accurate; this
    is the independent verification twin of :func:`return_closed_crw`.
    """
    if n < 1:
        raise ValueError("return_sum_form_crw needs n >= 1; r_0 = 1 by definition")
    a, b, c, d = transition.a, transition.b, transition.c, transition.d
    s = a * c * phi_hat.phi1_hat + b * d * phi_hat.phi2_hat
    ratio = (b * c) / (a * d)
    drift = (a * d - b * c) / (a * b * c * d) * s
    base = s / (a * d) + 1.0
    total = 0.0
    power = 1.0
    for g in range(1, n + 1):
        power *= ratio
        weight = binom(n - 1, g - 1) ** 2
        total += power * weight * ((n / g) * base + drift)
    return (a * d) ** n * total
