"""Dense Hermitian linear algebra for the small matrices (n <= 16) used by the
two-qubit layer and the SDP solver.

Everything here is a pure function of its arguments. The eigensolver is a
cyclic complex Jacobi iteration with a fixed sweep order, so identical input
bits always produce identical output bits.
"""
import math
from typing import NamedTuple

import numpy as np

from picolsd.errors import DimMismatch, InvalidMatrix, NotPsd, SingularSystem
from picolsd.logging import logger

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-10
SINGULAR_TOL = 1e-12
PSD_SQRT_TOL = 1e-9


class Spectrum(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a):
    """Return a complex copy of `a`, checking that it is square and finite."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch("expected a square matrix, got shape {}".format(m.shape))
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix has non-finite entries")
    return m


def hermitian(a):
    """Symmetrized complex copy of `a`."""
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


def dagger(a):
    return np.conj(a).T


def fro_norm(a):
    return float(np.linalg.norm(a))


def scale(a):
    return max(1.0, fro_norm(a))


def _off_norm(a):
    return fro_norm(a - np.diag(np.diag(a)))


def _rotate(a, v, p, q, floor):
    apq = a[p, q]
    mag = abs(apq)
    if mag <= floor:
        return
    phase = np.conj(apq) / mag
    theta = 0.5 * math.atan2(2.0 * mag, (a[q, q] - a[p, p]).real)
    c, s = math.cos(theta), math.sin(theta)
    g = np.array([[c, s], [-s * phase, c * phase]])
    cols = [p, q]
    a[:, cols] = a[:, cols] @ g
    a[cols, :] = g.conj().T @ a[cols, :]
    v[:, cols] = v[:, cols] @ g
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def _orthonormalize_clusters(values, vectors, tol):
    n = len(values)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] <= tol:
            stop += 1
        for k in range(start + 1, stop):
            col = vectors[:, k]
            for j in range(start, k):
                col = col - vectors[:, j] * np.vdot(vectors[:, j], col)
            vectors[:, k] = col / np.linalg.norm(col)
        start = stop


def eig_hermitian(a):
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues are returned ascending; eigenvectors are the columns of a
    unitary matrix. Vectors inside a numerically degenerate cluster are
    re-orthonormalized by Gram-Schmidt in index order.
    """
    a = hermitian(a)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = fro_norm(a)
    target = JACOBI_TOL * norm
    floor = 1e-18 * norm
    sweeps = 0
    while _off_norm(a) > target:
        if sweeps == JACOBI_MAX_SWEEPS:
            logger.warning(
                "Jacobi stopped after {} sweeps, off-diagonal norm {:.3e}".format(
                    sweeps, _off_norm(a)
                )
            )
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q, floor)
        sweeps += 1
    values = a.diagonal().real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    _orthonormalize_clusters(values, vectors, DEGENERACY_TOL * max(1.0, norm))
    return Spectrum(values, vectors)


def min_eig(a):
    return float(eig_hermitian(a).values[0])


def is_psd(a, tol):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return min_eig(a) >= -tol * scale(a)


def psd_sqrt(a, tol=PSD_SQRT_TOL):
    """Principal square root of a PSD matrix; eigenvalues that are negative
    within tolerance, or at the level of the eigensolver noise, are clamped
    to zero."""
    values, vectors = eig_hermitian(a)
    s = scale(a)
    if values[0] < -tol * s:
        raise NotPsd("smallest eigenvalue {:.3e} below tolerance".format(values[0]))
    roots = np.sqrt(np.where(values > JACOBI_TOL * s, values, 0.0))
    return hermitian((vectors * roots) @ dagger(vectors))


def rank_eps(a, eps):
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    values = eig_hermitian(a).values
    return int(np.count_nonzero(np.abs(values) > eps * scale(a)))


def frobenius_inner(a, b):
    """The trace pairing tr{AB}; the imaginary part vanishes for Hermitian
    arguments and is discarded."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimMismatch("shapes {} and {} differ".format(a.shape, b.shape))
    return float(np.sum(a * b.T).real)


def kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def solve_hermitian_linear(a, b, spectrum=None):
    """Solve A x = b for Hermitian nonsingular A.

    A precomputed `spectrum` of A may be passed to reuse one factorization for
    several right-hand sides.
    """
    real = np.isrealobj(a) and np.isrealobj(b)
    if spectrum is None:
        spectrum = eig_hermitian(a)
    values, vectors = spectrum
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != vectors.shape[0]:
        raise DimMismatch("right-hand side has length {}".format(b.shape[0]))
    if np.min(np.abs(values)) <= SINGULAR_TOL * fro_norm(a):
        raise SingularSystem(
            "smallest eigenvalue magnitude {:.3e}".format(np.min(np.abs(values)))
        )
    x = vectors @ ((dagger(vectors) @ b) / values)
    return x.real if real else x
