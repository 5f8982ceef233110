"""Unitary dilation of scaled unbroken evolution.

In the unbroken regime U(t) = Psi e^{-it Lambda} Psi^-1 is uniformly
bounded by ||Psi|| ||Psi^-1||, so a fixed c below the reciprocal bound
makes every c U(t) a strict contraction. A contraction extends to a
unitary on twice the dimensions via its defect operators,

    V = [[c U,            D_L],
         [D_R,     -c U^dag]],

with D_L = sqrt(I - c^2 U U^dag) and D_R = sqrt(I - c^2 U^dag U).
Applying V to a state supported on the first block and post-selecting
that block reproduces the normalized PT evolution with success
probability c^2 Tr[U rho U^dag]. The dilation is per time point; no
joint time-independent generator on the large space is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalDecomposition, pt_canonical_form
from .dynamics import TimeGrid, default_grid, propagator, validate_density
from .errors import (
    BrokenSymmetryError,
    DegeneratePostSelectionError,
    PreconditionError,
    ValidationError,
)
from .linalg import as_square, operator_norm, psd_square_root
from .symmetry import PTPair

DEFAULT_SLACK = 0.99


def uniform_bound(decomp: CanonicalDecomposition, slack: float = DEFAULT_SLACK) -> float:
    """c = slack / (||Psi|| ||Psi^-1||), valid for all real t.

    Requires an unbroken decomposition: with complex eigenvalues or a
    Jordan block the propagator norm is unbounded in t and no uniform
    c exists.
    """
    if not decomp.spectral_class.unbroken:
        raise BrokenSymmetryError("uniform bound requires an unbroken Hamiltonian")
    if not 0 < slack < 1:
        raise ValidationError("slack must lie in (0, 1)")
    sing = np.linalg.svd(decomp.Psi, compute_uv=False)
    return float(slack * sing[-1] / sing[0])


@dataclass(frozen=True)
class DilationResult:
    c: float
    V: np.ndarray
    unitarity_residual: float
    contraction_margin: float


def halmos_dilation(u, c: float) -> DilationResult:
    """Two-block unitary completion of the contraction c U."""
    u = as_square(u, "U")
    if not 0 < c <= 1:
        raise ValidationError("c must lie in (0, 1]")
    d = u.shape[0]
    eye = np.eye(d)
    gram_r = eye - c * c * (u.conj().T @ u)
    gram_l = eye - c * c * (u @ u.conj().T)
    min_eig = float(np.linalg.eigvalsh(gram_r)[0])
    if min_eig < -1e-10:
        raise PreconditionError(
            f"c U is not a contraction (eigenvalue {min_eig:.6e} of I - c^2 U^dag U)")
    d_l = psd_square_root(gram_l)
    d_r = psd_square_root(gram_r)
    v = np.block([[c * u, d_l], [d_r, -c * u.conj().T]])
    residual = operator_norm(v.conj().T @ v - np.eye(2 * d))
    return DilationResult(c=float(c), V=v, unitarity_residual=residual,
                          contraction_margin=min_eig)


@dataclass(frozen=True)
class EmbeddingReport:
    c: float
    times: np.ndarray
    max_deviation: float
    success_probabilities: np.ndarray
    unitarity_residuals: np.ndarray


def embedded_evolution_check(h, pair: PTPair, rho, grid: TimeGrid | None = None,
                             slack: float = DEFAULT_SLACK) -> EmbeddingReport:
    """Compare post-selected dilated evolution with the direct route.

    For each grid time the dilation V(t) acts on rho padded to twice
    the dimensions; the top block is post-selected and normalized, and
    its trace distance to U(t) rho U(t)^dag / Tr[...] is recorded. The
    success probability c^2 Tr[U rho U^dag] is reported per time.
    """
    h = as_square(h, "H")
    rho = validate_density(rho)
    decomp = pt_canonical_form(h, pair)
    c = uniform_bound(decomp, slack)
    grid = grid if grid is not None else default_grid()

    d = h.shape[0]
    times = grid.times
    deviations = np.empty(len(times))
    probs = np.empty(len(times))
    residuals = np.empty(len(times))
    big = np.zeros((2 * d, 2 * d), dtype=complex)
    for i, t in enumerate(times):
        u = propagator(h, t)
        dil = halmos_dilation(u, c)
        residuals[i] = dil.unitarity_residual

        big[:d, :d] = rho
        evolved = dil.V @ big @ dil.V.conj().T
        top = evolved[:d, :d]
        prob = float(np.trace(top).real)
        if prob < 1e-12:
            raise DegeneratePostSelectionError(
                f"success probability {prob:.3e} at t = {t:.6f}")
        probs[i] = prob

        direct = u @ rho @ u.conj().T
        direct = direct / np.trace(direct).real
        delta = top / prob - direct
        deviations[i] = 0.5 * float(np.sum(np.linalg.svd(delta, compute_uv=False)))

    return EmbeddingReport(
        c=c,
        times=times,
        max_deviation=float(np.max(deviations)),
        success_probabilities=probs,
        unitarity_residuals=residuals,
    )
