"""Exact branching-process analytics for the clustered-graph epidemic.

Forward process (early growth): three types of infected nodes, classified
by the edge along which they were infected and, for triangle edges, by
whether the twin is already infected.  Backward process (final size): the
susceptibility-set exploration, two types without vaccination and three
with.  All offspring generating functions are polynomials in the
transmission weight T and are evaluated exactly through the law's
node/weight functional.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .degrees import SINGLE, TRIANGLE, DegreeDistribution, validate_distribution
from .errors import ConvergenceError, DomainError
from .transmission import TransmissionLaw

STEP_TOL = 1e-13
RESIDUAL_TOL = 1e-10
MAX_ITERATIONS = 10**6

FORWARD = "forward"
BACKWARD2 = "backward2"
BACKWARD_VACC3 = "backward_vacc3"


@dataclass(frozen=True)
class _Atoms:
    k_s: np.ndarray
    k_delta: np.ndarray
    w: np.ndarray

    @classmethod
    def of(cls, dist: DegreeDistribution) -> "_Atoms":
        return cls(dist.k_s, dist.k_delta, dist.probs)


class _Model:
    """Shared precomputation: downshifted degree laws, T nodes, T moments."""

    def __init__(self, dist: DegreeDistribution, t_law: TransmissionLaw):
        self.dist = dist
        self.t_law = t_law
        m = dist.moments()
        self.has_single = m.mean_s > 0
        self.has_triangle = m.mean_delta > 0
        if not (self.has_single or self.has_triangle):
            raise DomainError("degree distribution has no edges at all")
        self.moments = m
        self.ancestor = _Atoms.of(dist)
        self.single_shifted = (
            _Atoms.of(dist.size_biased(SINGLE).downshift(SINGLE)) if self.has_single else None
        )
        self.triangle_shifted = (
            _Atoms.of(dist.size_biased(TRIANGLE).downshift(TRIANGLE))
            if self.has_triangle
            else None
        )
        max_degree = int(np.max(dist.k_s + 2 * dist.k_delta)) + 1
        self.t_nodes, self.t_weights = t_law.expectation_functional(max_degree)
        self.tm = t_law.derived_moments()

    # -- forward process (per-generation growth, arbitrary vaccination) --

    def forward_component(self, atoms: _Atoms, z, f_v: float, twin_factor: bool) -> float:
        """E[ A^{k_s} B^{k_delta} (extra) ] over the given degree atoms and T.

        A is the single-edge factor, B the per-triangle factor; with
        vaccination every attempted transmission succeeds only with
        probability (1 - f_v).
        """
        z1, z2, z3 = float(z[0]), float(z[1]), float(z[2])
        t, tw = self.t_nodes, self.t_weights
        g = 1.0 - f_v
        A = t * g * z3 + 1.0 - t + t * f_v
        B = (1.0 - t) ** 2 + 2.0 * t * (1.0 - t) * (g * z2 + f_v) + t**2 * (
            (g * z1) ** 2 + 2.0 * f_v * g * z1 + f_v**2
        )
        term = (
            A[None, :] ** atoms.k_s[:, None] * B[None, :] ** atoms.k_delta[:, None]
        )
        if twin_factor:
            term = term * (t * g * z1 + 1.0 - t * g)[None, :]
        return float(atoms.w @ term @ tw)

    # -- backward process (susceptibility sets) --

    def backward_edge_triplet(self) -> tuple[float, float, float]:
        """Probabilities that a triangle contributes 0, 1 or 2 members to
        the primary case's susceptibility set."""
        e_t, e_t2 = self.tm.e_t, self.tm.e_t2
        p2 = 3.0 * e_t**2 - 2.0 * e_t * e_t2
        p0 = (1.0 - e_t) ** 2
        return p0, 1.0 - p0 - p2, p2

    def backward_component(self, atoms: _Atoms, z) -> float:
        z1, z2 = float(z[0]), float(z[1])
        p0, p1, p2 = self.backward_edge_triplet()
        e_t = self.tm.e_t
        a = e_t * z1 + 1.0 - e_t
        b = p0 + p1 * z2 + p2 * z2**2
        return float(np.dot(atoms.w, a ** atoms.k_s * b ** atoms.k_delta))

    def backward_vacc_kernel(self, atoms: _Atoms, z, f_v: float) -> float:
        """Inner expectation of the vaccinated backward process (before the
        f_v + (1 - f_v)(...) susceptibility mixture of the parent)."""
        z1, z2, z3 = float(z[0]), float(z[1]), float(z[2])
        tm = self.tm
        a = tm.e_t * z3 + 1.0 - tm.e_t
        b = (
            (1.0 - tm.e_t) ** 2
            + 2.0 * tm.e_t * tm.e_t_1mt * (1.0 - f_v) * z1 * z2
            + 2.0 * tm.e_t * tm.e_t_1mt * f_v
            + 2.0 * tm.e_t * tm.e_1mt2 * z1
            + tm.e_t**2 * z1**2
        )
        return float(np.dot(atoms.w, a ** atoms.k_s * b ** atoms.k_delta))


@dataclass
class PgfEvaluator:
    """Multitype offspring PGF restricted to the active types.

    Inactive components (absent degree branches) are pinned at 1 and never
    influence the active ones.
    """

    model: str
    active: np.ndarray
    _fn: object = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.active)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        out = self._fn(z)
        out[~self.active] = 1.0
        return out


@dataclass(frozen=True)
class FixedPointResult:
    q: np.ndarray
    iterations: int
    residual: float


def _require(branch, name: str):
    if branch is None:
        raise DomainError(f"{name} branch absent for this degree distribution")
    return branch


def forward_offspring_pgf(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float, z
) -> np.ndarray:
    """All three forward components; absent type branches raise."""
    model = _Model(dist, t_law)
    tri = _require(model.triangle_shifted, "triangle")
    sing = _require(model.single_shifted, "single")
    return np.array(
        [
            model.forward_component(tri, z, f_v, twin_factor=False),
            model.forward_component(tri, z, f_v, twin_factor=True),
            model.forward_component(sing, z, f_v, twin_factor=False),
        ]
    )


def backward_offspring_pgf(dist: DegreeDistribution, t_law: TransmissionLaw, z) -> np.ndarray:
    """Unvaccinated backward PGF: component 1 single-origin, 2 triangle."""
    model = _Model(dist, t_law)
    sing = _require(model.single_shifted, "single")
    tri = _require(model.triangle_shifted, "triangle")
    return np.array(
        [model.backward_component(sing, z), model.backward_component(tri, z)]
    )


def backward_offspring_pgf_vacc(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float, z
) -> np.ndarray:
    """Vaccinated backward PGF: components 1/2 triangle-origin (2 known
    unvaccinated), component 3 single-origin."""
    model = _Model(dist, t_law)
    tri = _require(model.triangle_shifted, "triangle")
    sing = _require(model.single_shifted, "single")
    comp2 = model.backward_vacc_kernel(tri, z, f_v)
    return np.array(
        [
            f_v + (1.0 - f_v) * comp2,
            comp2,
            f_v + (1.0 - f_v) * model.backward_vacc_kernel(sing, z, f_v),
        ]
    )


def backward_edge_triplet(t_law: TransmissionLaw) -> tuple[float, float, float]:
    tm = t_law.derived_moments()
    p2 = 3.0 * tm.e_t**2 - 2.0 * tm.e_t * tm.e_t2
    p0 = (1.0 - tm.e_t) ** 2
    return p0, 1.0 - p0 - p2, p2


def ancestor_pgf(
    dist: DegreeDistribution,
    t_law: TransmissionLaw,
    f_v: float,
    model: str,
    z,
) -> float:
    """PGF of the initial (forward) or focal (backward) case, whose degree
    follows the unbiased law."""
    m = _Model(dist, t_law)
    if model == FORWARD:
        return m.forward_component(m.ancestor, z, f_v, twin_factor=False)
    if model == BACKWARD2:
        return m.backward_component(m.ancestor, z)
    if model == BACKWARD_VACC3:
        return f_v + (1.0 - f_v) * m.backward_vacc_kernel(m.ancestor, z, f_v)
    raise ValueError(f"unknown model {model!r}")


def forward_pgf_evaluator(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float
) -> PgfEvaluator:
    model = _Model(dist, t_law)
    active = np.array([model.has_triangle, model.has_triangle, model.has_single])

    def fn(z: np.ndarray) -> np.ndarray:
        out = np.ones(3)
        if model.has_triangle:
            tri = model.triangle_shifted
            out[0] = model.forward_component(tri, z, f_v, twin_factor=False)
            out[1] = model.forward_component(tri, z, f_v, twin_factor=True)
        if model.has_single:
            out[2] = model.forward_component(model.single_shifted, z, f_v, twin_factor=False)
        return out

    return PgfEvaluator(model=FORWARD, active=active, _fn=fn)


def backward_pgf_evaluator(dist: DegreeDistribution, t_law: TransmissionLaw) -> PgfEvaluator:
    model = _Model(dist, t_law)
    active = np.array([model.has_single, model.has_triangle])

    def fn(z: np.ndarray) -> np.ndarray:
        out = np.ones(2)
        if model.has_single:
            out[0] = model.backward_component(model.single_shifted, z)
        if model.has_triangle:
            out[1] = model.backward_component(model.triangle_shifted, z)
        return out

    return PgfEvaluator(model=BACKWARD2, active=active, _fn=fn)


def backward_vacc_pgf_evaluator(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float
) -> PgfEvaluator:
    model = _Model(dist, t_law)
    active = np.array([model.has_triangle, model.has_triangle, model.has_single])

    def fn(z: np.ndarray) -> np.ndarray:
        out = np.ones(3)
        if model.has_triangle:
            comp2 = model.backward_vacc_kernel(model.triangle_shifted, z, f_v)
            out[0] = f_v + (1.0 - f_v) * comp2
            out[1] = comp2
        if model.has_single:
            out[2] = f_v + (1.0 - f_v) * model.backward_vacc_kernel(
                model.single_shifted, z, f_v
            )
        return out

    return PgfEvaluator(model=BACKWARD_VACC3, active=active, _fn=fn)


def minimal_fixed_point(pgf: PgfEvaluator) -> FixedPointResult:
    """Iterate the PGF from the zero vector; the iterates increase
    componentwise to the minimal fixed point in [0, 1]^r."""
    q = np.zeros(pgf.dim)
    q[~pgf.active] = 1.0
    for iteration in range(1, MAX_ITERATIONS + 1):
        nxt = pgf(q)
        if np.any(nxt < q - 1e-12):
            raise ConvergenceError("fixed-point iterates are not monotone")
        step = float(np.max(np.abs(nxt - q)))
        q = nxt
        if step < STEP_TOL:
            break
    residual = float(np.max(np.abs(pgf(q) - q)))
    if residual > RESIDUAL_TOL:
        raise ConvergenceError(
            f"fixed point not reached: residual {residual:.3e} after {iteration} iterations"
        )
    return FixedPointResult(q=q, iterations=iteration, residual=residual)


def _mean_matrix_entries(model: _Model, f_v: float) -> np.ndarray:
    ds = model.dist.downshifted_means()
    tm = model.tm
    rows = []
    if model.has_triangle:
        d_dd, s_dd = ds.delta_given_delta, ds.s_given_delta
        rows.append([2 * tm.e_t2 * d_dd, 2 * tm.e_t_1mt * d_dd, tm.e_t * s_dd])
        rows.append(
            [2 * tm.e_t2 * d_dd + tm.e_t, 2 * tm.e_t_1mt * d_dd, tm.e_t * s_dd]
        )
    if model.has_single:
        d_s, s_s = ds.delta_given_s, ds.s_given_s
        rows.append([2 * tm.e_t2 * d_s, 2 * tm.e_t_1mt * d_s, tm.e_t * s_s])
    full = np.array(rows)
    cols = ([0, 1] if model.has_triangle else []) + ([2] if model.has_single else [])
    return (1.0 - f_v) * full[:, cols]


def forward_mean_matrix(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float = 0.0
) -> np.ndarray:
    """Mean offspring matrix of the forward process, scaled by (1 - f_v);
    absent degree branches drop the corresponding types."""
    if not 0.0 <= f_v < 1.0:
        raise DomainError(f"f_v must lie in [0, 1), got {f_v}")
    return _mean_matrix_entries(_Model(dist, t_law), f_v)


def perron_root(matrix: np.ndarray) -> float:
    """Largest real eigenvalue of a nonnegative matrix, polished on the
    characteristic polynomial."""
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0.0
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise DomainError("mean matrix must be finite and nonnegative")
    r = float(np.max(np.abs(np.linalg.eigvals(m))))
    coeffs = np.poly(m)
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    deriv = np.polyder(coeffs)
    for _ in range(100):
        p = float(np.polyval(coeffs, r))
        if abs(p) <= 1e-13 * scale:
            break
        dp = float(np.polyval(deriv, r))
        if dp == 0.0:
            break
        step = p / dp
        r -= step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    return max(r, 0.0)


@dataclass(frozen=True)
class AnalysisReport:
    r0: float
    r_v: float
    critical_coverage: float
    outbreak_probability: float
    final_size: float
    q_forward: np.ndarray
    q_backward: np.ndarray
    subcritical: bool
    f_v: float
    vaccinated_perron_root: float
    regularity_warning: bool
    iterations_forward: int
    iterations_backward: int

    def to_dict(self) -> dict:
        return {
            "r0": self.r0,
            "r_v": self.r_v,
            "critical_coverage": self.critical_coverage,
            "outbreak_probability": self.outbreak_probability,
            "final_size": self.final_size,
            "q_forward": [float(x) for x in self.q_forward],
            "q_backward": [float(x) for x in self.q_backward],
            "subcritical": self.subcritical,
            "f_v": self.f_v,
            "vaccinated_perron_root": self.vaccinated_perron_root,
            "regularity_warning": self.regularity_warning,
            "iterations_forward": self.iterations_forward,
            "iterations_backward": self.iterations_backward,
        }


def analyze(
    dist: DegreeDistribution, t_law: TransmissionLaw, f_v: float = 0.0
) -> AnalysisReport:
    """Full analytic summary: reproduction numbers, outbreak probability,
    expected major final size, and the underlying fixed points."""
    if not 0.0 <= f_v < 1.0:
        raise DomainError(f"f_v must lie in [0, 1), got {f_v}")
    report = validate_distribution(dist)
    model = _Model(dist, t_law)

    r0 = perron_root(_mean_matrix_entries(model, 0.0))
    vacc_root = (1.0 - f_v) * r0
    critical = max(0.0, 1.0 - 1.0 / r0) if r0 > 0 else 0.0
    subcritical = vacc_root <= 1.0

    fwd = forward_pgf_evaluator(dist, t_law, f_v)
    bwd = backward_vacc_pgf_evaluator(dist, t_law, f_v)
    if subcritical:
        q_f = np.ones(fwd.dim)
        q_b = np.ones(bwd.dim)
        it_f = it_b = 0
        outbreak = final = 0.0
    else:
        fp_f = minimal_fixed_point(fwd)
        fp_b = minimal_fixed_point(bwd)
        q_f, it_f = fp_f.q, fp_f.iterations
        q_b, it_b = fp_b.q, fp_b.iterations
        outbreak = 1.0 - ancestor_pgf(dist, t_law, f_v, FORWARD, q_f)
        final = 1.0 - ancestor_pgf(dist, t_law, f_v, BACKWARD_VACC3, q_b)

    return AnalysisReport(
        r0=r0,
        r_v=r0,
        critical_coverage=critical,
        outbreak_probability=outbreak,
        final_size=final,
        q_forward=q_f,
        q_backward=q_b,
        subcritical=subcritical,
        f_v=f_v,
        vaccinated_perron_root=vacc_root,
        regularity_warning=not report.a2_holds,
        iterations_forward=it_f,
        iterations_backward=it_b,
    )
