"""Exact Boolean-function analytics by full enumeration.

Truth tables and spectra are indexed by point bitmask with the fixed
convention: bit ``i`` set means coordinate ``x_i = -1`` (so mask 0 is the
all-ones point).  Under this convention the vector of evaluations of a
multilinear polynomial over the whole cube is the Walsh-Hadamard transform
of its coefficient vector, and the transform of a truth table divided by
2^n gives the correlation coefficients E[f(A) * prod_{i in S} A_i].

Everything in this module enumerates all 2^n points and is capped at
``ENUMERATION_CAP`` variables; the sampling estimators in
:mod:`ptflab.randomized` have no such cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, InputError
from .polynomial import MultilinearPolynomial, RealPoint, sign_pm1

ENUMERATION_CAP = 24


@dataclass(frozen=True)
class SignFunction:
    """A polynomial threshold function f(x) = sgn(p(x)) with sgn(0) = +1."""

    source: MultilinearPolynomial

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def degree(self) -> int:
        return self.source.degree

    def __call__(self, x: RealPoint) -> int:
        return sign_pm1(self.source.eval(x))


@dataclass(frozen=True, eq=False)
class TruthTable:
    """All 2^n values of a +-1 function, indexed by point bitmask."""

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.int8)
        if vals.shape != (1 << self.n,):
            raise InputError(f"truth table for n={self.n} must have length {1 << self.n}")
        if not np.all(np.abs(vals) == 1):
            raise InputError("truth table entries must all be +-1")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Correlation coefficients indexed by subset bitmask."""

    n: int
    coefficients: np.ndarray

    def coefficient(self, mask: int) -> float:
        return float(self.coefficients[mask])


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform (Hadamard ordering).

    Returns y with y[a] = sum_b x[b] * (-1)^popcount(a & b); applying it
    twice multiplies by the length.
    """
    a = np.array(values, dtype=np.float64, copy=True)
    size = a.shape[0]
    if size & (size - 1):
        raise InputError(f"transform length must be a power of two, got {size}")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :].copy()
        a[:, 0, :] = top + a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        a = a.reshape(size)
        h *= 2
    return a


def point_from_mask(n: int, mask: int) -> np.ndarray:
    """Decode a point bitmask into coordinates (bit set -> -1)."""
    bits = (mask >> np.arange(n)) & 1
    return 1.0 - 2.0 * bits


def all_points(n: int) -> np.ndarray:
    """The full (2^n, n) matrix of hypercube points in mask order."""
    _check_cap(n)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits


def evaluate_on_hypercube(p: MultilinearPolynomial) -> np.ndarray:
    """p evaluated at every point, in mask order, via the transform."""
    _check_cap(p.n)
    return fwht(p.dense_coefficients())


def truth_table(f: SignFunction) -> TruthTable:
    values = evaluate_on_hypercube(f.source)
    return TruthTable(f.n, np.where(values >= 0.0, 1, -1).astype(np.int8))


def fourier(t: TruthTable) -> FourierSpectrum:
    """Spectrum of a truth table; satisfies Parseval for +-1 functions."""
    coeffs = fwht(t.values.astype(np.float64)) / float(1 << t.n)
    return FourierSpectrum(t.n, coeffs)


def _table_average_sensitivity(values: np.ndarray, n: int) -> float:
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    total = 0
    for i in range(n):
        total += int(np.count_nonzero(values != values[idx ^ (1 << i)]))
    return total / size


def average_sensitivity_exact(f: SignFunction) -> float:
    """Expected number of pivotal coordinates, by edge enumeration."""
    return _table_average_sensitivity(truth_table(f).values, f.n)


def average_sensitivity_fourier(t: TruthTable) -> float:
    """Second path for the same quantity: sum over S of |S| * coeff(S)^2."""
    spectrum = fourier(t)
    sizes = np.bitwise_count(np.arange(1 << t.n, dtype=np.uint64)).astype(np.float64)
    return float(np.dot(sizes, spectrum.coefficients**2))


def noise_sensitivity_exact(f: SignFunction, delta: float) -> float:
    """Pr[f(A) != f(A~)] where A~ flips each coordinate with probability delta.

    Computed through the spectrum: 1/2 - 1/2 * sum_S coeff(S)^2 (1-2 delta)^|S|.
    """
    if not 0.0 <= delta <= 0.5:
        raise InputError(f"noise rate must lie in [0, 1/2], got {delta}")
    spectrum = fourier(truth_table(f))
    sizes = np.bitwise_count(np.arange(1 << f.n, dtype=np.uint64)).astype(np.float64)
    rho = 1.0 - 2.0 * delta
    return float(0.5 - 0.5 * np.dot(spectrum.coefficients**2, rho**sizes))


def gl_bound(n: int, d: int) -> float:
    """Gotsman-Linial conjectured average-sensitivity bound, verbatim.

    2^{-n+1} * sum_{k=0}^{d-1} C(n, floor((n-k)/2)) * (n - floor((n-k)/2)),
    evaluated in exact rational arithmetic and returned as a float.  The
    formula is reproduced as printed; no parity correction is attempted.
    """
    if not isinstance(n, int) or not isinstance(d, int):
        raise InputError("gl_bound expects integer arguments")
    if n <= 1:
        raise InputError(f"the bound is stated for n > 1, got n={n}")
    if d < 1:
        raise InputError(f"degree must be at least 1, got d={d}")
    total = 0
    for k in range(d):
        half = (n - k) // 2
        total += math.comb(n, half) * (n - half)
    return float(Fraction(total, 1 << (n - 1)))


def middle_layers_witness(n: int, d: int) -> MultilinearPolynomial:
    """Product of linear forms slicing the middle ``d`` layers of the cube.

    Thresholds are theta_j = 2j - (d-1) + sigma for j = 0..d-1, with
    sigma in {0, 1} minimal so that every theta_j has parity opposite to n;
    then no vertex lies on any hyperplane sum(x) = theta_j.  The product is
    expanded with x_i^2 = 1, so the result is the canonical multilinear
    representative, equal to the real product on every hypercube point.
    """
    if not isinstance(n, int) or not isinstance(d, int) or n < 1 or d < 1:
        raise InputError("middle_layers_witness expects positive integers")
    if d > n:
        raise InputError(f"need d <= n, got d={d} > n={n}")
    sigma = 0 if (n + d) % 2 == 0 else 1
    linear = MultilinearPolynomial.coordinate_sum(n)
    out = MultilinearPolynomial.constant(n, 1.0)
    for j in range(d):
        theta = 2 * j - (d - 1) + sigma
        out = out.multiply(linear + MultilinearPolynomial.constant(n, -float(theta)))
    return out


def gl_report_row(n: int, d: int) -> dict:
    """One witness-versus-bound comparison row.

    Keys: n, d, as_exact (sensitivity of the middle-layers witness),
    gl_bound, ratio, and witness_flag (True when the witness meets the
    bound to within 1e-9).
    """
    value = average_sensitivity_exact(SignFunction(middle_layers_witness(n, d)))
    bound = gl_bound(n, d)
    return {
        "n": n,
        "d": d,
        "as_exact": value,
        "gl_bound": bound,
        "ratio": value / bound,
        "witness_flag": abs(value - bound) <= 1e-9,
    }


def theorem_bound(n: float, d: int, c_log: float = 1.0, c_exp: float = 1.0) -> float:
    """Parameterized bound template sqrt(n) * (ln n)^{c_log d ln d} * 2^{c_exp d^2 ln d}.

    The asymptotic constants are user parameters, so the value is a
    comparison envelope rather than a literature claim.  Convention: natural
    logs, and the ln(d) factor in both exponents is replaced by
    max(1, ln d) so the degree factors never vanish (in particular d = 1
    contributes exponent c_log resp. c_exp, not 0).
    """
    if not n > 1:
        raise InputError(f"need n > 1, got n={n}")
    if not isinstance(d, int) or d < 1:
        raise InputError(f"degree must be a positive integer, got d={d}")
    if c_log < 0 or c_exp < 0:
        raise InputError("constants must be non-negative")
    log_d = max(1.0, math.log(d))
    return (
        math.sqrt(n)
        * math.log(n) ** (c_log * d * log_d)
        * 2.0 ** (c_exp * d * d * log_d)
    )


def _check_cap(n: int) -> None:
    if n > ENUMERATION_CAP:
        raise CapExceededError(
            f"full enumeration is capped at n <= {ENUMERATION_CAP}, got n={n}"
        )
