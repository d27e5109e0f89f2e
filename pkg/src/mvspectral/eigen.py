"""Dense symmetric and generalized eigendecomposition.

The generalized problem L x = lambda D x with diagonal positive D is reduced
to an ordinary symmetric problem on D^(-1/2) L D^(-1/2) and back-substituted,
so the returned eigenvectors are D-orthonormal.  Column signs follow a fixed
convention (largest-magnitude entry positive, ties broken by lowest index) to
make outputs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, DisconnectedGraph, IsolatedVertex, NoConvergence, NotSymmetric
from .graphs import COMBINATORIAL, Laplacian

SYMMETRY_RTOL = 1e-8

# Eigenvalues below ZERO_TOL_FACTOR * lambda_max count as "trivial" zeros.
ZERO_TOL_FACTOR = 1e-8


@dataclass(frozen=True, eq=False)
class EigenPairs:
    """Full spectrum of a symmetric matrix, eigenvalues ascending."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class GeneralizedEigenSolution:
    """Spectrum of (L, D); eigenvector columns satisfy x_i^T D x_j = delta_ij."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class Embedding:
    """Per-vertex coordinates from selected eigenvectors.

    ``coords`` is n x (k-1); ``eigenvalues`` holds the matching spectral
    values (mean diagonal scores for the joint-diagonalization method).
    """

    coords: np.ndarray
    eigenvalues: np.ndarray
    method: str | None = None


def fix_column_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive.

    np.argmax returns the first maximal index, which breaks magnitude ties
    deterministically in favour of the lowest index.
    """
    v = np.array(vectors)
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs[None, :]


def sym_eig(a) -> EigenPairs:
    """Full eigendecomposition of a dense symmetric matrix.

    Deterministic for bit-identical input.  Eigenvalues ascend; eigenvectors
    are orthonormal with the fixed sign convention applied.

    Raises:
        NotSymmetric: asymmetry beyond 1e-8 relative to the largest entry.
        NoConvergence: the underlying solver failed.
    """
    mat = np.asarray(a, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"matrix must be square, got {mat.shape}")
    scale = float(np.abs(mat).max())
    if scale > 0 and float(np.abs(mat - mat.T).max()) > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"asymmetry exceeds {SYMMETRY_RTOL:.0e} of scale")
    sym = 0.5 * (mat + mat.T)
    try:
        values, vectors = scipy.linalg.eigh(sym)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise NoConvergence(str(exc)) from exc
    vectors = fix_column_signs(vectors)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenPairs(values=values, vectors=vectors)


def _reduced_normalized(lap_matrix: np.ndarray, degrees: np.ndarray) -> np.ndarray:
    """D^(-1/2) L D^(-1/2), symmetrized against round-off."""
    inv_sqrt = 1.0 / np.sqrt(degrees)
    reduced = lap_matrix * inv_sqrt[:, None] * inv_sqrt[None, :]
    return 0.5 * (reduced + reduced.T)


def _check_degrees(degrees) -> np.ndarray:
    d = np.asarray(degrees, dtype=np.float64)
    bad = np.flatnonzero(d <= 0.0)
    if bad.size:
        raise IsolatedVertex(int(bad[0]))
    return d


def generalized_eig(lap: Laplacian | np.ndarray, degrees) -> GeneralizedEigenSolution:
    """Solve L x = lambda D x for a combinatorial Laplacian and degree vector.

    Raises:
        IsolatedVertex: some degree is not strictly positive.
    """
    if isinstance(lap, Laplacian):
        if lap.kind != COMBINATORIAL:
            raise ValueError("generalized_eig expects the combinatorial Laplacian")
        mat = lap.matrix
    else:
        mat = np.asarray(lap, dtype=np.float64)
    d = _check_degrees(degrees)
    if mat.shape[0] != d.shape[0]:
        raise DimensionError(f"Laplacian is {mat.shape}, degrees have length {d.shape[0]}")
    pairs = sym_eig(_reduced_normalized(mat, d))
    vectors = fix_column_signs(pairs.vectors / np.sqrt(d)[:, None])
    vectors.setflags(write=False)
    return GeneralizedEigenSolution(values=pairs.values, vectors=vectors)


def generalized_eigvals(lap_matrix: np.ndarray, degrees) -> np.ndarray:
    """Eigenvalues only of (L, D); cheaper when vectors are not needed."""
    d = _check_degrees(degrees)
    return scipy.linalg.eigh(_reduced_normalized(np.asarray(lap_matrix, dtype=np.float64), d),
                             eigvals_only=True)


def zero_multiplicity(values: np.ndarray) -> int:
    """Count eigenvalues that are zero up to ZERO_TOL_FACTOR * lambda_max."""
    vmax = float(values[-1])
    tol = ZERO_TOL_FACTOR * max(vmax, 0.0)
    return int(np.count_nonzero(values < tol)) if vmax > 0 else values.shape[0]


def smallest_nontrivial(sol: GeneralizedEigenSolution, count: int) -> Embedding:
    """Select the eigenvectors for the smallest ``count`` nontrivial eigenvalues.

    The single zero eigenvalue (constant direction) is skipped.  A zero
    multiplicity other than one means the graph is disconnected and is
    surfaced as an error rather than silently handled.

    Raises:
        DisconnectedGraph: the zero eigenvalue is not simple.
        DimensionError: count outside 1..n-1.
    """
    n = sol.values.shape[0]
    if not 1 <= count <= n - 1:
        raise DimensionError(f"count must be in 1..{n - 1}, got {count}")
    zeros = zero_multiplicity(sol.values)
    if zeros != 1:
        raise DisconnectedGraph(zeros)
    coords = np.array(sol.vectors[:, 1:1 + count])
    values = np.array(sol.values[1:1 + count])
    coords.setflags(write=False)
    values.setflags(write=False)
    return Embedding(coords=coords, eigenvalues=values)
