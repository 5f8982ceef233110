"""Superposition and coherence resource checks.

The free states of a fixed basis {c_i} (normalized, linearly
independent, not necessarily orthogonal) are the convex mixtures
rho = sum_i p_i |c_i><c_i|. Because the basis is a full linearly
independent set, the coefficient matrix R = C^-1 rho (C^-1)^dag is
unique, so freeness is exactly "R is diagonal with nonnegative
diagonal": no feasibility search is needed.

Incoherent states are the special case of an orthonormal basis. A
Kraus operator is free when it maps every basis ray onto a basis ray
(or annihilates it); checking the generators suffices because free
states are their convex hull.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import pt_canonical_form
from .dynamics import TimeGrid, default_grid, propagator, validate_density
from .errors import (
    BrokenSymmetryError,
    DimensionError,
    PreconditionError,
    SingularMatrixError,
    ValidationError,
)
from .linalg import as_square, as_vector, operator_norm
from .symmetry import PTPair


@dataclass(frozen=True)
class FreeBasis:
    """d normalized, linearly independent vectors in dimension d."""

    vectors: tuple

    @property
    def dim(self) -> int:
        return self.vectors[0].shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack(self.vectors)


def free_basis(vectors, lin_tol: float = 1e-10) -> FreeBasis:
    """Validate and normalize a candidate basis.

    The assembled column matrix must have smallest singular value above
    lin_tol; vectors are rescaled to unit Euclidean norm.
    """
    vecs = [as_vector(v, f"basis vector {i}") for i, v in enumerate(vectors)]
    d = vecs[0].shape[0]
    if any(v.shape[0] != d for v in vecs):
        raise DimensionError("basis vectors have mixed dimensions")
    if len(vecs) != d:
        raise ValidationError(f"need {d} basis vectors for dimension {d}, got {len(vecs)}")
    vecs = [v / np.linalg.norm(v) for v in vecs]
    c = np.column_stack(vecs)
    smin = float(np.linalg.svd(c, compute_uv=False)[-1])
    if smin <= lin_tol:
        raise ValidationError(
            f"basis is linearly dependent (smallest singular value {smin:.3e})")
    return FreeBasis(vectors=tuple(vecs))


@dataclass(frozen=True)
class FreeDecomposition:
    """Weights of the diagonal part of R and the off-diagonal defect."""

    weights: tuple
    residual: float


def _coefficients(rho: np.ndarray, basis: FreeBasis) -> np.ndarray:
    c = basis.matrix
    try:
        half = np.linalg.solve(c, rho)
        return np.linalg.solve(c, half.conj().T).conj().T
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("basis matrix is numerically singular") from exc


def is_superposition_free(rho, basis: FreeBasis,
                          tol: float = 1e-9) -> tuple[bool, FreeDecomposition]:
    """Test rho = sum_i p_i |c_i><c_i| via the dual-frame coefficients.

    Free iff every off-diagonal of R is within tol and every diagonal
    is above -tol; the diagonals are returned as the weights.
    """
    rho = validate_density(rho)
    if rho.shape[0] != basis.dim:
        raise DimensionError("rho dimension does not match the basis")
    r = _coefficients(rho, basis)
    off = r - np.diag(np.diag(r))
    residual = float(np.max(np.abs(off))) if off.size else 0.0
    weights = np.real(np.diag(r))
    ok = residual <= tol and bool(np.min(weights) >= -tol)
    return ok, FreeDecomposition(weights=tuple(float(w) for w in weights),
                                 residual=residual)


def is_incoherent(rho, orthobasis: FreeBasis,
                  tol: float = 1e-9) -> tuple[bool, FreeDecomposition]:
    """Superposition-freeness against an orthonormal basis."""
    c = orthobasis.matrix
    defect = operator_norm(c.conj().T @ c - np.eye(orthobasis.dim))
    if defect > max(tol, 1e-10):
        raise PreconditionError(
            f"basis is not orthonormal (defect {defect:.3e})")
    return is_superposition_free(rho, orthobasis, tol)


def free_kraus_defect(k, basis: FreeBasis, tol: float = 1e-8) -> float:
    """Worst-case parallelism defect of K over the basis rays.

    For every basis vector with ||K c_i|| > tol the defect is
    min_j (1 - |<c_j, K c_i>| / ||K c_i||); the maximum over i is
    returned (0 when every image lands on a basis ray).
    """
    k = as_square(k, "K")
    if k.shape[0] != basis.dim:
        raise DimensionError("K dimension does not match the basis")
    c = basis.matrix
    worst = 0.0
    for i in range(basis.dim):
        w = k @ basis.vectors[i]
        norm = float(np.linalg.norm(w))
        if norm <= tol:
            continue
        overlaps = np.abs(c.conj().T @ w) / norm
        worst = max(worst, float(1.0 - np.max(overlaps)))
    return worst


def is_free_kraus(k, basis: FreeBasis, tol: float = 1e-8) -> bool:
    """True iff K maps every basis ray onto a basis ray or annihilates it."""
    return free_kraus_defect(k, basis, tol) <= tol


@dataclass(frozen=True)
class FreeEvolutionReport:
    ok: bool
    worst_defect: float
    min_contraction_margin: float


def verify_free_evolution(h, pair: PTPair, c: float,
                          grid: TimeGrid | None = None,
                          tol: float = 1e-8) -> FreeEvolutionReport:
    """Check that c U(t) is a free operation of the eigenbasis of H.

    H must be unbroken; its (PT-adapted, unit-norm) eigenvectors form
    the free basis. At every grid point both conditions are checked:
    c U(t) maps basis rays to basis rays, and c^2 U(t)^dag U(t) <= I
    within tol (trace-nonincreasing). The report carries the worst
    parallelism defect and the smallest contraction margin
    min eig(I - c^2 U^dag U) across the grid.
    """
    h = as_square(h, "H")
    if c <= 0:
        raise ValidationError("scale c must be positive")
    decomp = pt_canonical_form(h, pair)
    if not decomp.spectral_class.unbroken:
        raise BrokenSymmetryError(
            "free-operation property requires an unbroken Hamiltonian")
    basis = free_basis([decomp.Psi[:, i] for i in range(decomp.dim)])
    grid = grid if grid is not None else default_grid()

    worst = 0.0
    margin = np.inf
    ok = True
    eye = np.eye(h.shape[0])
    for t in grid.times:
        u = propagator(h, t)
        ku = c * u
        gap = float(np.linalg.eigvalsh(eye - ku.conj().T @ ku)[0])
        margin = min(margin, gap)
        if gap < -tol:
            ok = False
        defect = free_kraus_defect(ku, basis, tol)
        worst = max(worst, defect)
        if defect > tol:
            ok = False
    return FreeEvolutionReport(ok=ok, worst_defect=worst,
                               min_contraction_margin=float(margin))
