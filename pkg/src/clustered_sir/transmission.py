"""Transmission-weight laws on [0, 1].

Every analytic quantity downstream is a polynomial expectation in the
per-node transmission weight T, so each law exposes exact raw moments and
an exact node/weight rule (atoms, or a moment-matched Gaussian rule) for
polynomial integration.  The continuous-time special case enters through
the Laplace transform of the infectious period, with the contact rate
fixed to 1 by rescaling time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal, hankel
from scipy.special import roots_jacobi

from .errors import ConvergenceError, DomainError

_EXACTNESS_TOL = 1e-12


@dataclass(frozen=True)
class TMoments:
    """The four T-moments the epidemic formulas consume."""

    e_t: float
    e_t2: float
    e_t_1mt: float
    e_1mt2: float


class TransmissionLaw:
    """Base interface: exact moments, quadrature nodes, and sampling."""

    def raw_moment(self, m: int) -> float:
        raise NotImplementedError

    def expectation_functional(self, max_degree: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights integrating every polynomial of degree
        <= max_degree exactly against the law."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def derived_moments(self) -> TMoments:
        e_t = self.raw_moment(1)
        e_t2 = self.raw_moment(2)
        return TMoments(
            e_t=e_t,
            e_t2=e_t2,
            e_t_1mt=e_t - e_t2,
            e_1mt2=1.0 - 2.0 * e_t + e_t2,
        )


class DiscreteAtoms(TransmissionLaw):
    """T supported on finitely many points; covers the point-mass and
    two-endpoint Bernoulli special cases."""

    def __init__(self, atoms: list[tuple[float, float]]):
        ts = np.array([t for t, _ in atoms], dtype=float)
        ws = np.array([w for _, w in atoms], dtype=float)
        if np.any((ts < 0) | (ts > 1)):
            raise DomainError("atom support outside [0, 1]")
        if np.any(ws < 0) or abs(ws.sum() - 1.0) > 1e-9:
            raise DomainError("atom weights are not a pmf")
        keep = ws > 0
        self.ts = ts[keep]
        self.ws = ws[keep] / ws[keep].sum()

    def raw_moment(self, m: int) -> float:
        return float(np.dot(self.ts**m, self.ws))

    def expectation_functional(self, max_degree: int) -> tuple[np.ndarray, np.ndarray]:
        return self.ts.copy(), self.ws.copy()

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(self.ts, size=size, p=self.ws)


def point_mass(t: float) -> DiscreteAtoms:
    return DiscreteAtoms([(t, 1.0)])


def bernoulli_endpoints(p: float) -> DiscreteAtoms:
    """P(T=1) = p = 1 - P(T=0)."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"bernoulli parameter {p} outside [0, 1]")
    return DiscreteAtoms([(0.0, 1.0 - p), (1.0, p)])


def _jacobi_rule_01(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Jacobi rule for weight t^b (1-t)^a on [0, 1],
    normalized to total mass 1 (i.e. the Beta(b+1, a+1) law)."""
    x, w = roots_jacobi(n, a, b)
    t = 0.5 * (x + 1.0)
    w = w / w.sum()
    return t, w


class BetaSymmetric(TransmissionLaw):
    """T ~ Beta(alpha, alpha): mean 1/2 with heterogeneity tuned by alpha
    (alpha -> 0 approaches the endpoint Bernoulli, alpha -> infinity the
    point mass at 1/2)."""

    def __init__(self, alpha: float):
        if alpha <= 0:
            raise DomainError(f"alpha must be positive, got {alpha}")
        self.alpha = float(alpha)

    def raw_moment(self, m: int) -> float:
        a = self.alpha
        out = 1.0
        for j in range(m):
            out *= (a + j) / (2 * a + j)
        return out

    def expectation_functional(self, max_degree: int) -> tuple[np.ndarray, np.ndarray]:
        n = max(1, (max_degree + 2) // 2)
        return _jacobi_rule_01(n, self.alpha - 1.0, self.alpha - 1.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.beta(self.alpha, self.alpha, size=size)


class LaplaceSpec:
    """Laplace transform of the infectious period, evaluated at
    nonnegative integers.  The named constructors keep enough structure
    for exact quadrature and sampling; a bare callable is accepted too.
    """

    def __init__(self, evaluator: Callable[[int], float], kind: str = "custom", param: float = 0.0):
        self._eval = evaluator
        self.kind = kind
        self.param = param
        if abs(self(0) - 1.0) > 1e-12:
            raise DomainError("Laplace transform must satisfy L(0) = 1")

    def __call__(self, z: int) -> float:
        val = float(self._eval(z))
        if not 0.0 <= val <= 1.0 + 1e-12:
            raise DomainError(f"L({z}) = {val} outside [0, 1]")
        return val

    @classmethod
    def exponential(cls, rate: float) -> "LaplaceSpec":
        if rate <= 0:
            raise DomainError(f"rate must be positive, got {rate}")
        return cls(lambda z: rate / (rate + z), kind="exponential", param=float(rate))

    @classmethod
    def constant(cls, duration: float) -> "LaplaceSpec":
        if duration < 0:
            raise DomainError(f"duration must be nonnegative, got {duration}")
        return cls(lambda z: math.exp(-z * duration), kind="constant", param=float(duration))


class InfectiousPeriod(TransmissionLaw):
    """Continuous-time case: T = 1 - exp(-tau) for an infectious period tau,
    with unit contact rate.  Moments come from the Laplace transform:
    E(T^m) = sum_k C(m, k) (-1)^k L(k)."""

    def __init__(self, laplace: LaplaceSpec):
        self.laplace = laplace

    def raw_moment(self, m: int) -> float:
        total = 0.0
        for k in range(m + 1):
            total += math.comb(m, k) * (-1) ** k * self.laplace(k)
        # alternating sum; clip the last few ulps of cancellation noise
        return min(max(total, 0.0), 1.0)

    def expectation_functional(self, max_degree: int) -> tuple[np.ndarray, np.ndarray]:
        lap = self.laplace
        if lap.kind == "constant":
            return np.array([1.0 - math.exp(-lap.param)]), np.array([1.0])
        n = max(1, (max_degree + 2) // 2)
        if lap.kind == "exponential":
            # tau ~ Exp(rate) makes T ~ Beta(1, rate)
            return _jacobi_rule_01(n, lap.param - 1.0, 0.0)
        return self._moment_matched_rule(n, max_degree)

    def _moment_matched_rule(self, n: int, max_degree: int) -> tuple[np.ndarray, np.ndarray]:
        """Golub-Welsch rule built from raw moments (custom Laplace specs
        only).  The Hankel factorization degrades for large degree, so the
        result is verified against the exact moments."""
        while n >= 1:
            mom = np.array([self.raw_moment(m) for m in range(2 * n + 1)])
            H = hankel(mom[: n + 1], mom[n : 2 * n + 1])
            try:
                R = np.linalg.cholesky(H).T
            except np.linalg.LinAlgError:
                n -= 1
                continue
            d = np.diag(R)
            alpha = np.empty(n)
            alpha[0] = R[0, 1] / d[0]
            for k in range(1, n):
                alpha[k] = R[k, k + 1] / d[k] - R[k - 1, k] / d[k - 1]
            beta = d[1:n] / d[: n - 1]
            vals, vecs = eigh_tridiagonal(alpha, beta)
            t = np.clip(vals, 0.0, 1.0)
            w = vecs[0] ** 2
            for m in range(max_degree + 1):
                if abs(np.dot(t**m, w) - self.raw_moment(m)) > _EXACTNESS_TOL:
                    raise ConvergenceError(
                        f"moment-matched rule not exact at degree {m}"
                    )
            return t, w
        raise ConvergenceError("could not build a moment-matched rule")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        lap = self.laplace
        if lap.kind == "exponential":
            return 1.0 - np.exp(-rng.exponential(scale=1.0 / lap.param, size=size))
        if lap.kind == "constant":
            return np.full(size, 1.0 - math.exp(-lap.param))
        raise DomainError("cannot sample from a custom Laplace spec")
