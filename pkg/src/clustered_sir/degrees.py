"""Joint single/triangle degree distributions.

A node of the clustered configuration model carries ``k_s`` single
half-edges and ``k_delta`` pairs of triangle half-edges.  This module
represents the joint law of ``(k_s, k_delta)`` as a finite pmf and derives
the size-biased and downshifted variants used by the branching-process
engine, together with their first and second moments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PmfError

SINGLE = "single"
TRIANGLE = "triangle"

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DegreeMoments:
    """First and second moments of the joint degree law."""

    mean_s: float
    mean_delta: float
    mean_s2: float
    mean_delta2: float
    mean_s_delta: float


@dataclass(frozen=True)
class DownshiftedMeans:
    """Means of the downshifted size-biased laws.

    ``None`` marks an absent branch (zero normalizer): the single branch
    needs ``E(S) > 0``, the triangle branch ``E(Delta) > 0``.
    """

    s_given_s: float | None
    delta_given_s: float | None
    s_given_delta: float | None
    delta_given_delta: float | None


@dataclass(frozen=True)
class ValidationReport:
    a2_holds: bool
    has_single: bool
    has_triangle: bool


class DegreeDistribution:
    """Finite pmf over joint degrees ``(k_s, k_delta)``.

    Masses summing to within 1e-9 of 1 are renormalized; anything further
    off, or any negative mass, raises :class:`PmfError`.  Zero-mass atoms
    are dropped.
    """

    def __init__(self, atoms: dict[tuple[int, int], float]):
        if not atoms:
            raise PmfError("empty pmf")
        cleaned: dict[tuple[int, int], float] = {}
        for (k_s, k_delta), prob in atoms.items():
            k_s, k_delta = int(k_s), int(k_delta)
            if k_s < 0 or k_delta < 0:
                raise PmfError(f"negative degree in atom ({k_s}, {k_delta})")
            if prob < 0:
                raise PmfError(f"negative mass {prob} at ({k_s}, {k_delta})")
            if prob > 0:
                cleaned[(k_s, k_delta)] = cleaned.get((k_s, k_delta), 0.0) + float(prob)
        if not cleaned:
            raise PmfError("pmf has no positive mass")
        total = sum(cleaned.values())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise PmfError(f"pmf mass sums to {total}, not 1")
        self.atoms = {k: v / total for k, v in cleaned.items()}
        keys = sorted(self.atoms)
        self.k_s = np.array([k for k, _ in keys], dtype=np.int64)
        self.k_delta = np.array([d for _, d in keys], dtype=np.int64)
        self.probs = np.array([self.atoms[k] for k in keys], dtype=float)

    def __repr__(self) -> str:
        return f"DegreeDistribution({self.atoms!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, DegreeDistribution) and self.atoms == other.atoms

    def moments(self) -> DegreeMoments:
        s, d, p = self.k_s, self.k_delta, self.probs
        return DegreeMoments(
            mean_s=float(np.dot(s, p)),
            mean_delta=float(np.dot(d, p)),
            mean_s2=float(np.dot(s * s, p)),
            mean_delta2=float(np.dot(d * d, p)),
            mean_s_delta=float(np.dot(s * d, p)),
        )

    def size_biased(self, kind: str) -> "DegreeDistribution":
        """Reweight atoms by ``k_s`` (single) or ``k_delta`` (triangle)."""
        weight = self.k_s if kind == SINGLE else self._triangle_weight(kind)
        norm = float(np.dot(weight, self.probs))
        if norm == 0.0:
            raise DomainError(f"size bias by {kind!r}: zero normalizer")
        mass = weight * self.probs / norm
        return DegreeDistribution(
            {
                (int(s), int(d)): float(m)
                for s, d, m in zip(self.k_s, self.k_delta, mass)
                if m > 0
            }
        )

    def _triangle_weight(self, kind: str) -> np.ndarray:
        if kind != TRIANGLE:
            raise ValueError(f"unknown kind {kind!r}")
        return self.k_delta

    def downshift(self, kind: str) -> "DegreeDistribution":
        """Remove the half-edge (single) or triangle membership (triangle)
        through which the node was reached.  Requires a size-biased input of
        the matching kind, so every atom must have the shifted coordinate >= 1.
        """
        if kind == SINGLE:
            if np.any(self.k_s < 1):
                raise DomainError("single downshift of an atom with k_s = 0")
            shifted = zip(self.k_s - 1, self.k_delta)
        elif kind == TRIANGLE:
            if np.any(self.k_delta < 1):
                raise DomainError("triangle downshift of an atom with k_delta = 0")
            shifted = zip(self.k_s, self.k_delta - 1)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return DegreeDistribution(
            {
                (int(s), int(d)): float(p)
                for (s, d), p in zip(shifted, self.probs)
            }
        )

    def downshifted_means(self) -> DownshiftedMeans:
        m = self.moments()
        if m.mean_s > 0:
            s_given_s = m.mean_s2 / m.mean_s - 1.0
            delta_given_s = m.mean_s_delta / m.mean_s
        else:
            s_given_s = delta_given_s = None
        if m.mean_delta > 0:
            s_given_delta = m.mean_s_delta / m.mean_delta
            delta_given_delta = m.mean_delta2 / m.mean_delta - 1.0
        else:
            s_given_delta = delta_given_delta = None
        return DownshiftedMeans(s_given_s, delta_given_s, s_given_delta, delta_given_delta)


def validate_distribution(dist: DegreeDistribution) -> ValidationReport:
    """Check the regularity conditions needed by the branching analysis.

    ``a2_holds`` requires some node with total activity >= 2 and positive
    single/triangle degree correlation; without it the mean matrices may
    fail to be positively regular, which downstream code flags rather than
    rejects.
    """
    m = dist.moments()
    max_ge_2 = any(max(d, s) >= 2 for s, d in dist.atoms)
    return ValidationReport(
        a2_holds=bool(max_ge_2 and m.mean_s_delta > 0),
        has_single=m.mean_s > 0,
        has_triangle=m.mean_delta > 0,
    )
