"""Sparse multilinear polynomials over {-1,+1}^n and R^n.

A polynomial is stored as a map from subset bitmasks to real coefficients
(bit ``i`` set means variable ``i`` occurs in the monomial).  Keys are
plain Python integers, so the representation itself scales to the sampling
regime (hundreds of variables); only the full-enumeration paths carry hard
caps.  Canonical form never stores coefficients with absolute value below
``COEFF_EPS``; all operations return new canonical polynomials, so
instances are safe to share between workers.

Points are plain numpy vectors: a ``RealPoint`` is any finite length-n float
vector, a ``HypercubePoint`` additionally has every entry equal to +-1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import CapExceededError, InputError

MAX_VARIABLES = 4096
COEFF_EPS = 1e-15
DENSE_CAP = 24

RealPoint = np.ndarray
HypercubePoint = np.ndarray


def sign_pm1(value: float) -> int:
    """Sign with the fixed convention sgn(0) = +1."""
    return 1 if value >= 0 else -1


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _as_point(x, n: int, name: str = "point") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InputError(f"{name} must be a length-{n} vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Moments:
    """Mean, variance and L2 norm of a polynomial under uniform +-1 inputs.

    By orthonormality of the monomial basis these equal the Gaussian-input
    moments as well: mean is the constant coefficient, the second moment is
    the coefficient sum of squares.
    """

    mean: float
    variance: float
    l2_norm: float


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Immutable sparse multilinear polynomial on ``n`` variables."""

    n: int
    terms: Mapping[int, float]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"variable count must be a non-negative integer, got {self.n!r}")
        if self.n > MAX_VARIABLES:
            raise InputError(f"at most {MAX_VARIABLES} variables supported, got n={self.n}")
        checked: dict[int, float] = {}
        for mask, coeff in self.terms.items():
            if not isinstance(mask, int) or mask < 0:
                raise InputError(f"term key must be a non-negative bitmask, got {mask!r}")
            if mask >> self.n:
                raise InputError(f"term {bin(mask)} references variables >= n={self.n}")
            c = float(coeff)
            if not math.isfinite(c):
                raise InputError(f"coefficient for term {bin(mask)} is not finite: {coeff!r}")
            if abs(c) < COEFF_EPS:
                continue
            checked[mask] = c
        # mask-sorted storage makes every term iteration, and hence all
        # floating-point summation orders, a function of the canonical form
        object.__setattr__(self, "terms", dict(sorted(checked.items())))

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, n: int) -> "MultilinearPolynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value: float) -> "MultilinearPolynomial":
        return cls(n, {0: value})

    @classmethod
    def from_vars(cls, n: int, terms: Mapping[tuple[int, ...], float]) -> "MultilinearPolynomial":
        """Build from ``{(i, j, ...): coeff}`` with variable-index tuples as keys."""
        out: dict[int, float] = {}
        for indices, coeff in terms.items():
            if len(set(indices)) != len(indices):
                raise InputError(f"repeated variable in term {indices}")
            for i in indices:
                if not 0 <= i < n:
                    raise InputError(f"variable index {i} out of range for n={n}")
            mask = mask_from_indices(indices)
            if mask in out:
                raise InputError(f"duplicate term {tuple(sorted(indices))}")
            out[mask] = coeff
        return cls(n, out)

    @classmethod
    def coordinate_sum(cls, n: int) -> "MultilinearPolynomial":
        """The linear form x_0 + x_1 + ... + x_{n-1}."""
        return cls(n, {1 << i: 1.0 for i in range(n)})

    # ------------------------------------------------------------------
    # structure

    @property
    def degree(self) -> int:
        """Largest monomial size; 0 for the empty polynomial (eval == 0)."""
        return max((mask.bit_count() for mask in self.terms), default=0)

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def support_mask(self) -> int:
        out = 0
        for mask in self.terms:
            out |= mask
        return out

    @property
    def support(self) -> tuple[int, ...]:
        """Indices of variables that actually occur in some term."""
        return tuple(iter_bits(self.support_mask))

    def compress_support(self) -> tuple["MultilinearPolynomial", tuple[int, ...]]:
        """Re-index onto the support variables only.

        Returns the compressed polynomial on ``k = len(support)`` variables
        together with the original indices, position ``j`` holding the old
        index of new variable ``j``.  Distributional quantities (moments,
        sign probabilities, sensitivities) are unchanged because dropped
        coordinates never occur in any term.
        """
        support = self.support
        position = {old: new for new, old in enumerate(support)}
        new_terms = {
            mask_from_indices(position[i] for i in iter_bits(mask)): coeff
            for mask, coeff in self.terms.items()
        }
        return MultilinearPolynomial(len(support), new_terms), support

    # ------------------------------------------------------------------
    # evaluation

    def eval(self, x: RealPoint) -> float:
        """Evaluate at a real point: sum over terms of coeff * prod of coords."""
        arr = _as_point(x, self.n)
        total = 0.0
        for mask, coeff in self.terms.items():
            prod = coeff
            for i in iter_bits(mask):
                prod *= arr[i]
            total += prod
        return total

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on a ``(m, n)`` matrix of points."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.n:
            raise InputError(f"expected an (m, {self.n}) matrix, got shape {pts.shape}")
        out = np.zeros(pts.shape[0])
        for mask, coeff in self.terms.items():
            acc = np.full(pts.shape[0], coeff)
            for i in iter_bits(mask):
                acc *= pts[:, i]
            out += acc
        return out

    def gradient(self, x: RealPoint) -> np.ndarray:
        arr = _as_point(x, self.n)
        grad = np.zeros(self.n)
        for mask, coeff in self.terms.items():
            for i in iter_bits(mask):
                prod = coeff
                for j in iter_bits(mask):
                    if j != i:
                        prod *= arr[j]
                grad[i] += prod
        return grad

    def directional_derivative(self, x: RealPoint, v: RealPoint) -> float:
        """D_v p(x) = v . grad p(x), computed through :meth:`gradient`."""
        vec = _as_point(v, self.n, "direction")
        return float(np.dot(vec, self.gradient(x)))

    # ------------------------------------------------------------------
    # calculus and restriction

    def partial_derivative(self, i: int) -> "MultilinearPolynomial":
        self._check_index(i)
        bit = 1 << i
        return MultilinearPolynomial(
            self.n, {mask ^ bit: coeff for mask, coeff in self.terms.items() if mask & bit}
        )

    def restrict(self, i: int, value: int) -> "MultilinearPolynomial":
        """Fix coordinate ``i`` to ``value`` in {-1, +1}.

        The result lives on the same index space but never mentions ``i``;
        cancellations are dropped by canonicalization.
        """
        self._check_index(i)
        if value not in (-1, 1):
            raise InputError(f"restriction value must be -1 or +1, got {value!r}")
        bit = 1 << i
        out: dict[int, float] = {}
        for mask, coeff in self.terms.items():
            if mask & bit:
                key, add = mask ^ bit, value * coeff
            else:
                key, add = mask, coeff
            out[key] = out.get(key, 0.0) + add
        return MultilinearPolynomial(self.n, out)

    def restrict_many(self, assignment: Mapping[int, int]) -> "MultilinearPolynomial":
        poly = self
        for i in sorted(assignment):
            poly = poly.restrict(i, assignment[i])
        return poly

    # ------------------------------------------------------------------
    # moments, influences, regularity

    def moments(self) -> Moments:
        mean = self.terms.get(0, 0.0)
        variance = sum(c * c for mask, c in self.terms.items() if mask != 0)
        return Moments(mean=mean, variance=variance, l2_norm=math.sqrt(mean * mean + variance))

    def influence(self, i: int) -> float:
        """Squared L2 norm of the i-th partial derivative."""
        self._check_index(i)
        bit = 1 << i
        return sum(c * c for mask, c in self.terms.items() if mask & bit)

    def influences(self) -> np.ndarray:
        out = np.zeros(self.n)
        for mask, coeff in self.terms.items():
            sq = coeff * coeff
            for i in iter_bits(mask):
                out[i] += sq
        return out

    def total_influence(self) -> float:
        return float(self.influences().sum())

    def max_influence(self) -> tuple[int, float]:
        """Most influential coordinate, lowest index winning ties."""
        if self.n == 0:
            raise InputError("polynomial has no coordinates")
        infl = self.influences()
        idx = int(np.argmax(infl))
        return idx, float(infl[idx])

    def is_regular(self, tau: float) -> bool:
        """True iff every influence is at most tau times the variance.

        Undefined for constant polynomials (zero variance): callers must
        handle constants separately.
        """
        if tau <= 0:
            raise InputError(f"tau must be positive, got {tau}")
        mom = self.moments()
        if mom.variance == 0.0:
            raise InputError("regularity is undefined for a constant polynomial (zero variance)")
        if self.n == 0:
            return True
        _, top = self.max_influence()
        return top <= tau * mom.variance

    # ------------------------------------------------------------------
    # algebra

    def scale(self, c: float) -> "MultilinearPolynomial":
        return MultilinearPolynomial(self.n, {m: c * v for m, v in self.terms.items()})

    def __add__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        self._check_same_space(other)
        out = dict(self.terms)
        for mask, coeff in other.terms.items():
            out[mask] = out.get(mask, 0.0) + coeff
        return MultilinearPolynomial(self.n, out)

    def __sub__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        return self + other.scale(-1.0)

    def __neg__(self) -> "MultilinearPolynomial":
        return self.scale(-1.0)

    def multiply(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        """Product inside the function algebra on {-1,+1}^n.

        Uses x_i^2 = 1, i.e. monomial masks combine by XOR, so the result
        agrees with the real product on hypercube points (not on general
        real inputs).
        """
        self._check_same_space(other)
        out: dict[int, float] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = m1 ^ m2
                out[key] = out.get(key, 0.0) + c1 * c2
        return MultilinearPolynomial(self.n, out)

    def __mul__(self, other):
        if isinstance(other, MultilinearPolynomial):
            return self.multiply(other)
        return self.scale(float(other))

    __rmul__ = __mul__

    # ------------------------------------------------------------------
    # dense view for enumeration paths

    def dense_coefficients(self) -> np.ndarray:
        """Length-2^n coefficient vector indexed by subset bitmask."""
        if self.n > DENSE_CAP:
            raise CapExceededError(
                f"dense enumeration is capped at n <= {DENSE_CAP}, got n={self.n}"
            )
        out = np.zeros(1 << self.n)
        for mask, coeff in self.terms.items():
            out[mask] = coeff
        return out

    # ------------------------------------------------------------------
    # JSON wire format

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"vars": list(iter_bits(mask)), "coeff": self.terms[mask]}
                for mask in sorted(self.terms)
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data) -> "MultilinearPolynomial":
        """Parse the wire format, rejecting anything non-canonical.

        Rejects duplicate subsets, unsorted or repeated indices inside a
        term, indices >= n, and non-finite coefficients.
        """
        if not isinstance(data, dict):
            raise InputError("polynomial JSON must be an object")
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise InputError(f"polynomial JSON field 'n' must be a non-negative integer, got {n!r}")
        raw_terms = data.get("terms")
        if not isinstance(raw_terms, list):
            raise InputError("polynomial JSON field 'terms' must be a list")
        seen: dict[int, float] = {}
        for k, item in enumerate(raw_terms):
            if not isinstance(item, dict) or set(item) != {"vars", "coeff"}:
                raise InputError(f"term {k} must be an object with keys 'vars' and 'coeff'")
            variables = item["vars"]
            if not isinstance(variables, list) or not all(
                isinstance(i, int) and not isinstance(i, bool) for i in variables
            ):
                raise InputError(f"term {k}: 'vars' must be a list of integers")
            if variables != sorted(variables):
                raise InputError(f"term {k}: variable indices must be sorted, got {variables}")
            if len(set(variables)) != len(variables):
                raise InputError(f"term {k}: repeated variable index in {variables}")
            if variables and (variables[0] < 0 or variables[-1] >= n):
                raise InputError(f"term {k}: variable index out of range for n={n}: {variables}")
            coeff = item["coeff"]
            if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
                raise InputError(f"term {k}: coefficient must be a number, got {coeff!r}")
            if not math.isfinite(float(coeff)):
                raise InputError(f"term {k}: coefficient must be finite, got {coeff!r}")
            mask = mask_from_indices(variables)
            if mask in seen:
                raise InputError(f"term {k}: duplicate subset {variables}")
            seen[mask] = float(coeff)
        return cls(n, seen)

    @classmethod
    def from_json(cls, text: str) -> "MultilinearPolynomial":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid polynomial JSON: {e}") from e
        return cls.from_json_dict(data)

    # ------------------------------------------------------------------

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < self.n:
            raise InputError(f"coordinate index {i!r} out of range for n={self.n}")

    def _check_same_space(self, other: "MultilinearPolynomial") -> None:
        if self.n != other.n:
            raise InputError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __repr__(self) -> str:
        if not self.terms:
            return f"MultilinearPolynomial(n={self.n}, 0)"
        parts = []
        for mask in sorted(self.terms):
            name = "1" if mask == 0 else "*".join(f"x{i}" for i in iter_bits(mask))
            parts.append(f"{self.terms[mask]:+g}*{name}")
        return f"MultilinearPolynomial(n={self.n}, {' '.join(parts)})"
