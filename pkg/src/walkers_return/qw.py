"""One-dimensional discrete-time quantum walk.

The coin is a 2x2 unitary U = e^{i theta} [[alpha, beta], [-conj(beta),
conj(alpha)]] acting on the chirality (Left/Right) degree of freedom; the
walker then shifts one unit in the chirality direction.  The module
provides three independent routes to the return probability at the origin:

* exact amplitude evolution (:func:`simulate_return`),
* the path-sum matrix of all balanced left/right step orderings
  (:func:`xi_lemma1`, cross-checked by :func:`xi_bruteforce`),
* the Legendre closed form (:func:`return_closed_qw`).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .series import ReturnSeries
from .specfun import binom, legendre_eval

__all__ = [
    "CoinMatrix",
    "QWInitialState",
    "AmplitudeField",
    "PathSumMatrix",
    "decompose",
    "step",
    "evolve",
    "simulate_return",
    "xi_lemma1",
    "xi_bruteforce",
    "return_lemma1",
    "return_closed_qw",
    "return_series_qw",
    "return_hadamard",
]

_NORM_TOL = 1e-12
_BRUTEFORCE_MAX_STEPS = 14


@dataclass(frozen=True)
class CoinMatrix:
    """Unitary coin parametrized by a global phase and the top row.

    Entries: a = e^{i theta} alpha, b = e^{i theta} beta,
    c = -e^{i theta} conj(beta), d = e^{i theta} conj(alpha).
    Both alpha and beta must be nonzero: the excluded boundary coins are a
    pure shift or a pure reflection and sit outside every closed form here.
    """

    theta: float
    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 2.0 * math.pi:
            raise ValueError(f"theta must lie in [0, 2*pi), got {self.theta}")
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm}")
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("boundary coins with alpha = 0 or beta = 0 are not supported")

    @property
    def a(self) -> complex:
        return cmath.exp(1j * self.theta) * self.alpha

    @property
    def b(self) -> complex:
        return cmath.exp(1j * self.theta) * self.beta

    @property
    def c(self) -> complex:
        return -cmath.exp(1j * self.theta) * self.beta.conjugate()

    @property
    def d(self) -> complex:
        return cmath.exp(1j * self.theta) * self.alpha.conjugate()

    @property
    def alpha_sq(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def k(self) -> float:
        """Legendre argument 2|alpha|^2 - 1 of the closed form."""
        return 2.0 * self.alpha_sq - 1.0

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @classmethod
    def hadamard(cls) -> "CoinMatrix":
        """The Hadamard coin (1/sqrt2) [[1, 1], [1, -1]]."""
        s = -1j / math.sqrt(2.0)
        return cls(theta=math.pi / 2.0, alpha=s, beta=s)

    @classmethod
    def from_alpha_sq(
        cls,
        alpha_sq: float,
        *,
        theta: float = 0.0,
        alpha_phase: float = 0.0,
        beta_phase: float = 0.0,
    ) -> "CoinMatrix":
        if not 0.0 < alpha_sq < 1.0:
            raise ValueError(f"alpha_sq must lie in (0, 1), got {alpha_sq}")
        alpha = math.sqrt(alpha_sq) * cmath.exp(1j * alpha_phase)
        beta = math.sqrt(1.0 - alpha_sq) * cmath.exp(1j * beta_phase)
        return cls(theta=theta, alpha=alpha, beta=beta)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "CoinMatrix":
        # |alpha|^2 away from the excluded endpoints 0 and 1.
        return cls.from_alpha_sq(
            rng.uniform(0.05, 0.95),
            theta=rng.uniform(0.0, 2.0 * math.pi),
            alpha_phase=rng.uniform(0.0, 2.0 * math.pi),
            beta_phase=rng.uniform(0.0, 2.0 * math.pi),
        )


@dataclass(frozen=True)
class QWInitialState:
    """Normalized chirality state phi = phi1 |L> + phi2 |R> at the origin."""

    phi1: complex
    phi2: complex

    def __post_init__(self) -> None:
        norm = abs(self.phi1) ** 2 + abs(self.phi2) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|phi1|^2 + |phi2|^2 must be 1, got {norm}")

    def vector(self) -> np.ndarray:
        return np.array([self.phi1, self.phi2], dtype=complex)

    @classmethod
    def canonical(cls) -> "QWInitialState":
        """The balanced state (1/sqrt2, i/sqrt2)."""
        s = 1.0 / math.sqrt(2.0)
        return cls(phi1=s, phi2=1j * s)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "QWInitialState":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(phi1=complex(v[0]), phi2=complex(v[1]))


@dataclass(frozen=True)
class AmplitudeField:
    """Full walker state at one time step.

    Dense storage over positions -time..time: column j of `amps` holds the
    (L, R) amplitude pair at position x = j - time.  Odd-parity slots stay
    exactly zero because the shift update never writes into them.
    """

    time: int
    amps: np.ndarray  # complex128 of shape (2, 2*time + 1)

    @classmethod
    def from_state(cls, phi: QWInitialState) -> "AmplitudeField":
        amps = np.zeros((2, 1), dtype=complex)
        amps[:, 0] = phi.vector()
        return cls(time=0, amps=amps)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.time, self.time + 1)

    def amplitude(self, x: int) -> np.ndarray:
        if abs(x) > self.time:
            return np.zeros(2, dtype=complex)
        return self.amps[:, x + self.time]

    def probability(self, x: int) -> float:
        amp = self.amplitude(x)
        return float(np.abs(amp[0]) ** 2 + np.abs(amp[1]) ** 2)

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def position_distribution(self) -> np.ndarray:
        return np.abs(self.amps[0]) ** 2 + np.abs(self.amps[1]) ** 2


def decompose(coin: CoinMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split U into the move-left/right pieces P, Q plus the swapped rows R, S.

    P = [[a, b], [0, 0]], Q = [[0, 0], [c, d]], R = [[c, d], [0, 0]],
    S = [[0, 0], [a, b]]; P + Q = U.
    """
    a, b, c, d = coin.a, coin.b, coin.c, coin.d
    p = np.array([[a, b], [0, 0]], dtype=complex)
    q = np.array([[0, 0], [c, d]], dtype=complex)
    r = np.array([[c, d], [0, 0]], dtype=complex)
    s = np.array([[0, 0], [a, b]], dtype=complex)
    return p, q, r, s


def step(field: AmplitudeField, coin: CoinMatrix) -> AmplitudeField:
    """One time step: new(x) = P old(x+1) + Q old(x-1)."""
    t = field.time
    new = np.zeros((2, 2 * t + 3), dtype=complex)
    # L-amplitudes come from the right neighbour, R-amplitudes from the left.
    new[0, : 2 * t + 1] = coin.a * field.amps[0] + coin.b * field.amps[1]
    new[1, 2:] = coin.c * field.amps[0] + coin.d * field.amps[1]
    return AmplitudeField(time=t + 1, amps=new)


def evolve(coin: CoinMatrix, phi: QWInitialState, n: int) -> AmplitudeField:
    """State after n steps from the origin."""
    if n < 0:
        raise ValueError(f"step count must be non-negative, got {n}")
    field = AmplitudeField.from_state(phi)
    for _ in range(n):
        field = step(field, coin)
    return field


def simulate_return(coin: CoinMatrix, phi: QWInitialState, nmax: int) -> ReturnSeries:
    """Return probabilities r_0..r_nmax by direct evolution."""
    if nmax < 0:
        raise ValueError(f"nmax must be non-negative, got {nmax}")
    values = np.empty(nmax + 1)
    field = AmplitudeField.from_state(phi)
    values[0] = field.probability(0)
    for n in range(1, nmax + 1):
        field = step(field, coin)
        values[n] = field.probability(0)
    return ReturnSeries(model="qw", values=values, params={"alpha_sq": coin.alpha_sq})


@dataclass(frozen=True)
class PathSumMatrix:
    """Sum of all n_left + n_right step products with the given composition."""

    n_left: int
    n_right: int
    matrix: np.ndarray  # 2x2 complex

    def probability(self, phi: QWInitialState) -> float:
        vec = self.matrix @ phi.vector()
        return float(np.abs(vec[0]) ** 2 + np.abs(vec[1]) ** 2)


def xi_bruteforce(coin: CoinMatrix, l: int, m: int) -> PathSumMatrix:
    """Path sum by explicit enumeration of every P/Q word.

    Words are applied in time order (first step = rightmost factor).  The
    C(l+m, l) products cap at l+m <= 14 to stay at desk scale.
    """
    if l < 0 or m < 0:
        raise ValueError(f"step counts must be non-negative, got ({l}, {m})")
    nsteps = l + m
    if nsteps > _BRUTEFORCE_MAX_STEPS:
        raise ValueError(
            f"brute-force enumeration capped at {_BRUTEFORCE_MAX_STEPS} steps, got {nsteps}"
        )
    p, q, _, _ = decompose(coin)
    total = np.zeros((2, 2), dtype=complex)
    for left_slots in itertools.combinations(range(nsteps), l):
        left = set(left_slots)
        word = np.eye(2, dtype=complex)
        for i in range(nsteps):
            factor = p if i in left else q
            word = factor @ word
        total += word
    return PathSumMatrix(n_left=l, n_right=m, matrix=total)


def _lemma_sums(coin: CoinMatrix, n: int) -> tuple[float, float, float]:
    """The three scalar weights of the balanced path sum, exactly.

    sigma1 = sum_g (1/g) rho^g C(n-1, g-1)^2 and sigma0 = the unweighted
    sum, with rho = bc/(ad) = -|beta|^2/|alpha|^2.  The alternating terms
    cancel almost completely for small |alpha| (the true sums are ~rho^n
    times smaller than the largest term), so they are accumulated in exact
    rational arithmetic and rounded once at the end.
    """
    rho = -Fraction(abs(coin.beta) ** 2) / Fraction(abs(coin.alpha) ** 2)
    sigma1 = Fraction(0)
    sigma0 = Fraction(0)
    power = Fraction(1)
    for g in range(1, n + 1):
        power *= rho
        weight = Fraction(binom(n - 1, g - 1) ** 2)
        sigma0 += power * weight
        sigma1 += power * weight / g
    return float(sigma1), float(sigma0), float(n * sigma1 - sigma0)


def xi_lemma1(coin: CoinMatrix, n: int) -> PathSumMatrix:
    """Balanced path sum over 2n steps (n left, n right) in closed form.

    a^n d^n sum_g (bc/ad)^g C(n-1, g-1)^2
        [ ((n-g)/(a g)) P + ((n-g)/(d g)) Q + (1/c) R + (1/b) S ].
    """
    if n < 1:
        raise ValueError("xi_lemma1 needs n >= 1; the 0-step path sum is the identity")
    p, q, r, s = decompose(coin)
    _, sigma0, drift = _lemma_sums(coin, n)
    a, b, c, d = coin.a, coin.b, coin.c, coin.d
    prefactor = (a * d) ** n
    matrix = prefactor * (
        (drift / a) * p + (drift / d) * q + (sigma0 / c) * r + (sigma0 / b) * s
    )
    return PathSumMatrix(n_left=n, n_right=n, matrix=matrix)


def return_lemma1(coin: CoinMatrix, phi: QWInitialState, n: int) -> float:
    """Return probability at time 2n via the path-sum matrix."""
    if n == 0:
        return 1.0
    return xi_lemma1(coin, n).probability(phi)


def _closed_even(k: float, p_lo: float, p_hi: float) -> float:
    """Closed-form r_{2j} from (P_{j-1}(k), P_j(k))."""
    return (p_lo * p_lo - 2.0 * k * p_hi * p_lo + p_hi * p_hi) / (2.0 * (k + 1.0))


def return_closed_qw(alpha_sq: float, n: int) -> float:
    """Legendre closed form for the return probability at time n.

    r_{2j} = ({P_{j-1}(k)}^2 - 2k P_j(k) P_{j-1}(k) + {P_j(k)}^2) / (2(k+1))
    with k = 2|alpha|^2 - 1; odd times return 0, r_0 = 1.
    """
    if not 0.0 < alpha_sq < 1.0:
        raise ValueError(f"alpha_sq must lie in (0, 1), got {alpha_sq}")
    if n < 0:
        raise ValueError(f"time must be non-negative, got {n}")
    if n == 0:
        return 1.0
    if n % 2 == 1:
        return 0.0
    j = n // 2
    k = 2.0 * alpha_sq - 1.0
    return _closed_even(k, legendre_eval(j - 1, k), legendre_eval(j, k))


def return_series_qw(alpha_sq: float, nmax: int) -> ReturnSeries:
    """Closed-form return series r_0..r_nmax in one recurrence sweep."""
    if not 0.0 < alpha_sq < 1.0:
        raise ValueError(f"alpha_sq must lie in (0, 1), got {alpha_sq}")
    if nmax < 0:
        raise ValueError(f"nmax must be non-negative, got {nmax}")
    k = 2.0 * alpha_sq - 1.0
    values = np.zeros(nmax + 1)
    values[0] = 1.0
    p_prev, p = 1.0, k  # P_0(k), P_1(k)
    for j in range(1, nmax // 2 + 1):
        values[2 * j] = _closed_even(k, p_prev, p)
        p_prev, p = p, ((2 * j + 1) * k * p - j * p_prev) / (j + 1)
    return ReturnSeries(model="qw", values=values, params={"alpha_sq": alpha_sq})


def return_hadamard(n: int) -> float:
    """Hadamard-walk return probability at time n.

    r_0 = 1, r_2 = 1/2, and r_{4m} = r_{4m+2} = C(2m, m)^2 / 2^{4m+1}.
    """
    if n < 0:
        raise ValueError(f"time must be non-negative, got {n}")
    if n == 0:
        return 1.0
    if n % 2 == 1:
        return 0.0
    j = n // 2
    # Exactly one of j-1, j is even; only the even-degree value survives at 0.
    even = j if j % 2 == 0 else j - 1
    m = even // 2
    central = binom(2 * m, m) / 4.0**m
    return 0.5 * central * central
