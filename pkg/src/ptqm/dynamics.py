"""Time evolution under e^{-itH} and invariant tracking.

Evolution of a density matrix is the unnormalized conjugation
rho -> U(t) rho U(t)^dag. In the broken regime the trace grows or
decays exponentially; silently renormalizing would mask exactly the
behavior the invariants quantify, so normalization is a separate,
explicit step.

In the canonical eigenbasis the coefficient matrix evolves as
R(t) = e^{-itJ} R e^{itJ^dag}, which makes the conserved combinations
readable off the block structure: an entry R[a,b] is constant when its
column eigenvalues satisfy lam_a = conj(lam_b), and the anti-diagonal
sum of every Jordan or conjugate-pair unit is constant because the
reversal matrix satisfies S e^{itJ^dag} S = e^{itJ} block by block.
Tr(eta rho(t)) is constant for every intertwining metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import COMPLEX_PAIR, CanonicalDecomposition, SpectralClass, pt_canonical_form
from .errors import InvalidDensityError, PreconditionError, ValidationError
from .linalg import as_square, matrix_exponential
from .metric import MetricOperator, SignCharacteristic, basis_coefficients, build_metric, eta_trace
from .symmetry import PTPair

OVERFLOW_EXPONENT = 30.0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time samples on [t_start, t_end]."""

    t_start: float
    t_end: float
    num_points: int

    def __post_init__(self):
        if self.num_points < 1:
            raise ValidationError("num_points must be at least 1")
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise ValidationError("grid endpoints must be finite")
        if self.num_points > 1 and self.t_end <= self.t_start:
            raise ValidationError("t_end must exceed t_start")
        if self.t_end < self.t_start:
            raise ValidationError("t_end must not precede t_start")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.num_points)


def default_grid() -> TimeGrid:
    """201 points on [0, 10]: resolves O(1) eigenvalue-gap oscillations
    while keeping full runs sub-second."""
    return TimeGrid(0.0, 10.0, 201)


@dataclass(frozen=True)
class InvariantReport:
    times: np.ndarray
    coefficient_series: np.ndarray
    eta_trace_series: np.ndarray
    case_tag: SpectralClass
    drift: dict
    overflow_risk: bool
    t_cap: float | None
    decomposition: CanonicalDecomposition
    metric: MetricOperator


def _unit_exponential(lam: complex, n: int, s: complex) -> np.ndarray:
    """e^{s J_n(lam)} = e^{s lam} sum_k s^k N^k / k! (N nilpotent)."""
    out = np.zeros((n, n), dtype=complex)
    coeff = 1.0 + 0.0j
    for k in range(n):
        out += coeff * np.eye(n, k=k)
        coeff = coeff * s / (k + 1)
    return np.exp(s * lam) * out


def _canonical_exponential(decomp: CanonicalDecomposition, s: complex) -> np.ndarray:
    d = decomp.J.shape[0]
    out = np.zeros((d, d), dtype=complex)
    off = 0
    for b in decomp.blocks:
        lams = ((b.eigenvalue, np.conj(b.eigenvalue))
                if b.kind == COMPLEX_PAIR else (b.eigenvalue,))
        for lam in lams:
            out[off:off + b.order, off:off + b.order] = _unit_exponential(lam, b.order, s)
            off += b.order
    return out


def propagator(h, t: float, decomp: CanonicalDecomposition | None = None) -> np.ndarray:
    """U(t) = e^{-itH}.

    Given the canonical decomposition of the same H, the exponential is
    assembled from closed-form unit exponentials, U = Psi e^{-itJ}
    Psi^-1, which avoids the squaring error growth of the dense route
    when t ||H|| is large.
    """
    if decomp is None:
        return matrix_exponential(h, -1j * float(t))
    e = _canonical_exponential(decomp, -1j * float(t))
    return np.linalg.solve(decomp.Psi.T, (decomp.Psi @ e).T).T


def validate_density(rho, tol: float = 1e-10) -> np.ndarray:
    """Check Hermiticity, positive semidefiniteness, and unit trace."""
    m = as_square(rho, "rho")
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    if np.linalg.norm(m - m.conj().T, 2) > tol * scale:
        raise InvalidDensityError("density matrix is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    if float(np.linalg.eigvalsh(m)[0]) < -tol * scale:
        raise InvalidDensityError("density matrix is not positive semidefinite")
    if abs(np.trace(m).real - 1.0) > tol:
        raise InvalidDensityError("density matrix trace is not 1")
    return m


def evolve_density(rho, h, t: float, val_tol: float = 1e-10,
                   decomp: CanonicalDecomposition | None = None) -> np.ndarray:
    """U(t) rho U(t)^dag, not renormalized."""
    m = validate_density(rho, val_tol)
    u = propagator(h, t, decomp)
    return u @ m @ u.conj().T


def normalize_density(rho, floor: float = 1e-12) -> np.ndarray:
    """Divide by the trace; errors when the trace has collapsed."""
    m = as_square(rho, "rho")
    tr = complex(np.trace(m)).real
    if abs(tr) < floor:
        raise PreconditionError(f"trace {tr:.3e} is below the normalization floor")
    return m / tr


def _column_eigenvalues(decomp: CanonicalDecomposition):
    """Per-column eigenvalue and unit bookkeeping.

    Returns (lams, simple, units) where lams[c] is the eigenvalue of
    column c, simple[c] says the column belongs to an order-1 unit, and
    units lists (offset, span) for every unit of order >= 2.
    """
    lams = []
    simple = []
    units = []
    offset = 0
    for b in decomp.blocks:
        span = 2 * b.order if b.kind == COMPLEX_PAIR else b.order
        if b.kind == COMPLEX_PAIR:
            lams.extend([b.eigenvalue] * b.order)
            lams.extend([np.conj(b.eigenvalue)] * b.order)
        else:
            lams.extend([b.eigenvalue] * b.order)
        simple.extend([b.order == 1] * span)
        if b.order >= 2:
            units.append((offset, span))
        offset += span
    return np.array(lams), simple, units


def invariant_report(h, pair: PTPair, rho, grid: TimeGrid | None = None,
                     signs: SignCharacteristic | None = None,
                     tol: float = 1e-8, *,
                     cluster_tol: float | None = None) -> InvariantReport:
    """Track the conserved coefficient combinations along the evolution.

    The drift of an invariant is the maximum absolute deviation of its
    series from the t = 0 value. Which entries are tracked follows
    from the detected block structure; Tr(eta rho(t)) is always
    tracked. In broken cases with t ||H|| beyond the overflow exponent
    the report flags overflow risk and computes drift only on the
    usable part of the grid.
    """
    h = as_square(h, "H")
    rho = validate_density(rho)
    grid = grid if grid is not None else default_grid()

    decomp = pt_canonical_form(h, pair, tol, cluster_tol=cluster_tol)
    met = build_metric(decomp, signs)
    times = grid.times

    d = h.shape[0]
    series = np.empty((len(times), d, d), dtype=complex)
    traces = np.empty(len(times), dtype=complex)
    for i, t in enumerate(times):
        rho_t = evolve_density(rho, h, t, decomp=decomp)
        series[i] = basis_coefficients(rho_t, decomp)
        traces[i] = eta_trace(rho_t, met.eta)

    h_norm = float(np.linalg.norm(h, 2))
    overflow = False
    t_cap = None
    usable = np.ones(len(times), dtype=bool)
    if not decomp.spectral_class.unbroken and h_norm > 0:
        t_cap = OVERFLOW_EXPONENT / h_norm
        if float(np.max(np.abs(times))) > t_cap:
            overflow = True
            usable = np.abs(times) <= t_cap

    scale = max(1.0, h_norm)
    lams, simple, units = _column_eigenvalues(decomp)

    drift: dict[str, float] = {}

    def record(key, values):
        drift[key] = float(np.max(np.abs(values[usable] - values[0])))

    record("eta_trace", traces)
    for a in range(d):
        for b in range(d):
            if simple[a] and simple[b] and abs(lams[a] - np.conj(lams[b])) <= tol * scale:
                record(f"R_{a + 1}_{b + 1}", series[:, a, b])
    for offset, span in units:
        idx = [(offset + i, offset + span - 1 - i) for i in range(span)]
        key = "+".join(f"R_{a + 1}_{b + 1}" for a, b in idx)
        values = np.sum([series[:, a, b] for a, b in idx], axis=0)
        record(key, values)

    return InvariantReport(
        times=times,
        coefficient_series=series,
        eta_trace_series=traces,
        case_tag=decomp.spectral_class,
        drift=drift,
        overflow_risk=overflow,
        t_cap=t_cap,
        decomposition=decomp,
        metric=met,
    )
