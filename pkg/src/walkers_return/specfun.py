"""Special-function kernels: Legendre/Jacobi polynomials, terminating
hypergeometric sums, binomial coefficients, complete elliptic integrals.

Conventions
-----------
Elliptic integrals take the MODULUS as argument:

    K(m) = integral_0^{pi/2} dt / sqrt(1 - m^2 sin^2 t),   0 <= m < 1
    E(m) = integral_0^{pi/2} sqrt(1 - m^2 sin^2 t) dt,     0 <= m <= 1

This is *not* the parameter convention (parameter = modulus squared) used
by several libraries; every call site in this package passes the modulus.

Legendre and Jacobi(1,0) polynomials are evaluated by forward three-term
recurrence, which is stable on [-1, 1].  Arguments with |x| > 1 are legal
(the correlated-walk closed form needs them); when such values would
overflow they must be evaluated jointly with their decaying prefactor via
:func:`scaled_legendre_pair`.
"""

from __future__ import annotations

import math
import threading

import numpy as np

__all__ = [
    "legendre_eval",
    "legendre_range",
    "jacobi10_eval",
    "hyp2f1_terminating",
    "binom",
    "ellipK",
    "ellipK_from_complement",
    "ellipE",
    "script_K",
    "script_E",
    "scaled_legendre_pair",
    "SpecFunTable",
]

_AGM_MAX_ITER = 40


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _require_degree(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"degree must be an integer, got {n!r}")
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    return int(n)


def legendre_eval(n: int, x: float) -> float:
    """Legendre polynomial P_n(x) by the three-term recurrence.

    P_0 = 1, P_1 = x, (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}.
    """
    n = _require_degree(n)
    x = _require_finite("x", x)
    if n == 0:
        return 1.0
    p_prev, p = 1.0, x
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p


def legendre_range(n: int, x: float) -> np.ndarray:
    """All values P_0(x), ..., P_n(x) in one forward pass."""
    n = _require_degree(n)
    x = _require_finite("x", x)
    out = np.empty(n + 1)
    out[0] = 1.0
    if n == 0:
        return out
    out[1] = x
    for j in range(1, n):
        out[j + 1] = ((2 * j + 1) * x * out[j] - j * out[j - 1]) / (j + 1)
    return out


def jacobi10_eval(n: int, x: float) -> float:
    """Jacobi polynomial P_n^(1,0)(x).

    Specialization of the general Jacobi recurrence:
    P_0 = 1, P_1 = (3x+1)/2,
    (j+1)(2j-1) P_j = ((2j+1)(2j-1) x + 1) P_{j-1} - (j-1)(2j+1) P_{j-2}.
    """
    n = _require_degree(n)
    x = _require_finite("x", x)
    if n == 0:
        return 1.0
    p_prev, p = 1.0, (3.0 * x + 1.0) / 2.0
    for j in range(2, n + 1):
        p_prev, p = p, (
            ((2 * j + 1) * (2 * j - 1) * x + 1.0) * p - (j - 1) * (2 * j + 1) * p_prev
        ) / ((j + 1) * (2 * j - 1))
    return p


def hyp2f1_terminating(n: int, b: float, c: float, z: float) -> float:
    """Terminating hypergeometric sum 2F1(-n, b; c; z).

    Because the first parameter is a non-positive integer the series is an
    exact finite sum of n+1 terms; no convergence questions arise.
    """
    n = _require_degree(n)
    b = _require_finite("b", b)
    c = _require_finite("c", c)
    z = _require_finite("z", z)
    # (c)_j vanishes for some j <= n-1 iff c is one of 0, -1, ..., -(n-1).
    if n >= 1 and c <= 0 and c == int(c) and c > -n:
        raise ValueError(
            f"2F1 pole: c={c} hits a non-positive integer before the series terminates"
        )
    total = 1.0
    term = 1.0
    for j in range(n):
        term *= (-(n - j)) * (b + j) / ((c + j) * (j + 1)) * z
        total += term
    return total


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k).

    Arbitrary-precision integers keep this exact at every size, which the
    path-sum verification routes rely on.
    """
    if not isinstance(n, (int, np.integer)) or not isinstance(k, (int, np.integer)):
        raise ValueError("binom arguments must be integers")
    if k < 0 or n < 0:
        raise ValueError(f"binom arguments must be non-negative, got ({n}, {k})")
    if k > n:
        raise ValueError(f"binom requires k <= n, got ({n}, {k})")
    return math.comb(int(n), int(k))


def _agm(m: float) -> tuple[float, float]:
    """AGM iteration for modulus m: returns (K(m), c-sum for E).

    a_0 = 1, b_0 = sqrt(1-m^2), c_0 = m; the second value is
    sum_i 2^{i-1} c_i^2, so E = K * (1 - that sum).
    """
    a = 1.0
    bb = math.sqrt((1.0 - m) * (1.0 + m))
    c = m
    csum = 0.5 * c * c
    weight = 0.5
    for _ in range(_AGM_MAX_ITER):
        # Quadratic convergence stalls at the rounding floor of a - b
        # (about half an ulp of a), so the cut sits just above one ulp.
        if abs(c) <= 4e-16 * a:
            return math.pi / (2.0 * a), csum
        c = 0.5 * (a - bb)
        a, bb = 0.5 * (a + bb), math.sqrt(a * bb)
        weight *= 2.0
        csum += weight * c * c
    raise RuntimeError(f"AGM did not converge for modulus {m}")  # pragma: no cover


def ellipK(m: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention."""
    m = _require_finite("m", m)
    if not 0.0 <= m < 1.0:
        raise ValueError(f"ellipK requires modulus in [0, 1), got {m} (K diverges at 1)")
    return _agm(m)[0]


def ellipK_from_complement(mc: float) -> float:
    """K(m) evaluated from the complementary modulus mc = sqrt(1 - m^2).

    Near m = 1 the modulus itself rounds to 1 and K appears to diverge,
    but mc is often computable without cancellation; K = pi / (2 AGM(1, mc))
    stays accurate there (K grows only like log(4/mc)).
    """
    mc = _require_finite("mc", mc)
    if not 0.0 < mc <= 1.0:
        raise ValueError(f"complementary modulus must lie in (0, 1], got {mc}")
    a, bb = 1.0, mc
    for _ in range(_AGM_MAX_ITER):
        if a - bb <= 4e-16 * a:
            return math.pi / (2.0 * a)
        a, bb = 0.5 * (a + bb), math.sqrt(a * bb)
    raise RuntimeError(f"AGM did not converge for complement {mc}")  # pragma: no cover


def ellipE(m: float) -> float:
    """Complete elliptic integral of the second kind, modulus convention."""
    m = _require_finite("m", m)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"ellipE requires modulus in [0, 1], got {m}")
    if m == 1.0:
        return 1.0
    k, csum = _agm(m)
    return k * (1.0 - csum)


def _script_pieces(x: float, z: float) -> tuple[float, float]:
    """Inner modulus and sqrt-denominator shared by script K and script E."""
    x = _require_finite("x", x)
    z = _require_finite("z", z)
    if not -1.0 < x < 1.0:
        raise ValueError(f"first argument must lie in (-1, 1), got {x}")
    if not 0.0 <= z < 1.0:
        raise ValueError(f"second argument must lie in [0, 1), got {z}")
    denom = 1.0 - 2.0 * z * (2.0 * x * x - 1.0) + z * z
    if denom <= 0.0:
        raise ValueError(f"denominator 1 - 2z(2x^2-1) + z^2 is not positive at (x={x}, z={z})")
    mod_sq = 4.0 * z * (1.0 - x * x) / denom
    if not 0.0 <= mod_sq < 1.0:
        raise ValueError(
            f"inner modulus^2 = {mod_sq} outside [0, 1) at (x={x}, z={z}); admissible z is [0, 1)"
        )
    return math.sqrt(mod_sq), math.sqrt(denom)


def script_K(x: float, z: float) -> float:
    """Kernel K(sqrt(4z(1-x^2)/D)) / sqrt(D) with D = 1 - 2z(2x^2-1) + z^2."""
    modulus, root = _script_pieces(x, z)
    return ellipK(modulus) / root


def script_E(x: float, z: float) -> float:
    """Kernel E(sqrt(4z(1-x^2)/D)) / sqrt(D) with D = 1 - 2z(2x^2-1) + z^2."""
    modulus, root = _script_pieces(x, z)
    return ellipE(modulus) / root


def scaled_legendre_pair(n: int, numer: float, denom: float) -> tuple[float, float]:
    """Jointly evaluate (denom^(n-1) P_{n-1}(numer/denom), denom^n P_n(numer/denom)).

    T_j = denom^j P_j(numer/denom) satisfies the scaled recurrence

        (j+1) T_{j+1} = (2j+1) numer T_j - j denom^2 T_{j-1},

    with T_0 = 1, T_1 = numer.  Every iterate stays bounded whenever the
    target quantity is, so |numer/denom| > 1 (or denom -> 0, where the pair
    tends to the leading-term limit) never overflows even though P_n alone
    would.
    """
    n = _require_degree(n)
    if n == 0:
        raise ValueError("scaled_legendre_pair needs n >= 1 (the pair ends at degree n)")
    numer = _require_finite("numer", numer)
    denom = _require_finite("denom", denom)
    t_prev, t = 1.0, numer
    d2 = denom * denom
    for j in range(1, n):
        t_prev, t = t, ((2 * j + 1) * numer * t - j * d2 * t_prev) / (j + 1)
    return t_prev, t


class SpecFunTable:
    """Memo table for Legendre, Jacobi(1,0), and elliptic-pair values.

    Pure memoization: a cached value is always bit-for-bit the value a
    fresh evaluation would produce.  Inserts are lock-guarded so concurrent
    readers only ever observe completed entries.
    """

    def __init__(self) -> None:
        self._legendre: dict[tuple[int, float], float] = {}
        self._jacobi10: dict[tuple[int, float], float] = {}
        self._elliptic: dict[float, tuple[float, float]] = {}
        self._lock = threading.Lock()

    def legendre(self, n: int, x: float) -> float:
        key = (int(n), float(x))
        try:
            return self._legendre[key]
        except KeyError:
            value = legendre_eval(n, x)
            with self._lock:
                self._legendre.setdefault(key, value)
            return value

    def jacobi10(self, n: int, x: float) -> float:
        key = (int(n), float(x))
        try:
            return self._jacobi10[key]
        except KeyError:
            value = jacobi10_eval(n, x)
            with self._lock:
                self._jacobi10.setdefault(key, value)
            return value

    def elliptic_pair(self, m: float) -> tuple[float, float]:
        """(K(m), E(m)) for one modulus, cached together."""
        key = float(m)
        try:
            return self._elliptic[key]
        except KeyError:
            value = (ellipK(m), ellipE(m))
            with self._lock:
                self._elliptic.setdefault(key, value)
            return value

    @property
    def legendre_cache(self) -> dict[tuple[int, float], float]:
        return dict(self._legendre)

    @property
    def jacobi10_cache(self) -> dict[tuple[int, float], float]:
        return dict(self._jacobi10)

    @property
    def elliptic_cache(self) -> dict[float, tuple[float, float]]:
        return dict(self._elliptic)
