"""Two-qubit operators: Pauli and magic bases, partial transposition,
concurrence and the canonical frame of a pure state orthogonal to a rank-3
density matrix."""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from picolsd.errors import InvalidState, RankMismatch
from picolsd.linalg import (
    dagger,
    eig_hermitian,
    fro_norm,
    hermitian,
    is_psd,
    kron,
    psd_sqrt,
    rank_eps,
)

RANK_EPS = 1e-9
PPT_TOL = 1e-9
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
GS_TOL = 1e-6
MAX_ENTANGLED_SNAP = 1e-12
SCHMIDT_TOL = 1e-9

SQRT2 = np.sqrt(2.0)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

KET_PLUS = np.array([1, 1], dtype=complex) / SQRT2
KET_MINUS = np.array([1, -1], dtype=complex) / SQRT2

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / SQRT2
PSI_PLUS = 1j * np.array([0, 1, 1, 0], dtype=complex) / SQRT2
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / SQRT2

MAGIC = np.column_stack(
    [
        PHI_PLUS,
        1j * np.array([1, 0, 0, -1], dtype=complex) / SQRT2,
        PSI_PLUS,
        PSI_MINUS,
    ]
)

SPIN_FLIP = np.kron(PAULI[2], PAULI[2])


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def projector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def pauli_product(i, j):
    """sigma_i tensor tau_j, with sigma acting on the first qubit."""
    return kron(PAULI[i], PAULI[j])


@lru_cache(maxsize=None)
def pauli_basis():
    """The 16 operators E_{4i+j} = sigma_i tau_j in lexicographic order.

    E[0] is the identity; tr{E_k E_l} = 4 delta_kl.
    """
    return tuple(_frozen(pauli_product(i, j)) for i in range(4) for j in range(4))


def pauli_components(a):
    """Coefficients tr{E_k A}, so that A = sum_k c_k E_k / 4."""
    a = np.asarray(a)
    return np.array([np.sum(e * a.T).real for e in pauli_basis()])


def to_magic(a):
    return dagger(MAGIC) @ np.asarray(a, dtype=complex) @ MAGIC


def from_magic(a):
    return MAGIC @ np.asarray(a, dtype=complex) @ dagger(MAGIC)


def partial_trace_1(a):
    return np.einsum("ijik->jk", np.asarray(a, dtype=complex).reshape(2, 2, 2, 2))


def partial_transpose_1(a):
    """Partial transposition on the first qubit, realized as sigma -> -sigma.

    This is the literal first-factor transpose conjugated by sigma_2 x 1, so
    spectra are those of the literal transpose. Unlike the literal transpose
    it commutes with conjugation by any local unitary u x v.
    """
    a = np.asarray(a, dtype=complex)
    return np.kron(PAULI[0], partial_trace_1(a)) - a


def density_matrix(a):
    """Validate a 4x4 density matrix and return its Hermitian part."""
    rho = hermitian(a)
    if rho.shape != (4, 4):
        raise InvalidState("expected a 4x4 matrix, got {}".format(rho.shape))
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidState("trace is {!r}, not 1".format(tr))
    if not is_psd(rho, PPT_TOL):
        raise InvalidState("matrix is not positive semidefinite")
    return rho


def pure_state(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise InvalidState("expected 4 amplitudes, got {}".format(v.shape[0]))
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise InvalidState("state vector is not normalized")
    return v


def fix_phase(v):
    """Rotate the global phase so that the first amplitude of (numerically)
    largest magnitude is real and positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    top = mags.max()
    if top == 0.0:
        return v
    k = int(np.argmax(mags >= (1.0 - 1e-9) * top))
    return v * (abs(v[k]) / v[k])


def is_ppt(rho, tol=PPT_TOL):
    return is_psd(partial_transpose_1(rho), tol)


def concurrence(psi):
    psi = np.asarray(psi, dtype=complex)
    return float(min(1.0, abs(psi @ SPIN_FLIP @ psi)))


def spin_flip(rho):
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def concurrence_mixed(rho):
    root = psd_sqrt(rho)
    values = eig_hermitian(root @ spin_flip(rho) @ root).values
    lam = np.sort(np.sqrt(np.clip(values, 0.0, None)))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def orthogonal_pure_state(rho):
    """Phase-fixed unit vector spanning the kernel of a rank-3 state."""
    rank = rank_eps(rho, RANK_EPS)
    if rank != 3:
        raise RankMismatch("expected a rank-3 state, got rank {}".format(rank))
    return fix_phase(eig_hermitian(rho).vectors[:, 0])


def schmidt_weights(q, p=None):
    """(q, p, a, b) with a >= b >= 0 the Schmidt coefficients, q = 2ab and
    p = a^2 - b^2. Without `p`, a q within MAX_ENTANGLED_SNAP of 1 is taken
    as 1; with it, a p below SCHMIDT_TOL is."""
    q = float(min(1.0, max(0.0, q)))
    if p is None:
        near_one = 1.0 - q <= MAX_ENTANGLED_SNAP
        p = 0.0 if near_one else np.sqrt((1.0 - q) * (1.0 + q))
    if p <= SCHMIDT_TOL:
        q, p = 1.0, 0.0
    a = np.sqrt((1.0 + p) / 2.0)
    b = np.sqrt((1.0 - p) / 2.0)
    return q, float(p), a, b


def canonical_gamma_vector(q, p=None):
    """a|+-> - b|-+> with Schmidt weights fixed by the concurrence q."""
    _, _, a, b = schmidt_weights(q, p)
    return a * np.kron(KET_PLUS, KET_MINUS) - b * np.kron(KET_MINUS, KET_PLUS)


@dataclass(frozen=True)
class CanonicalGamma:
    q: float
    p: float
    u_local: np.ndarray
    v_local: np.ndarray
    gamma_input: np.ndarray

    @property
    def is_product(self):
        return self.q <= SCHMIDT_TOL

    @property
    def local(self):
        """u x v; maps the input frame onto the canonical frame."""
        return kron(self.u_local, self.v_local)

    @property
    def vector(self):
        return canonical_gamma_vector(self.q, self.p)


def _complement(v):
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def canonicalize_gamma(gamma):
    """Find local unitaries u, v with (u x v)|gamma> = a|+-> - b|-+>.

    The Schmidt vectors are phase-fixed and the second one is completed with
    det v = det u when the second Schmidt coefficient vanishes. A maximally
    entangled gamma has a degenerate reduced state and uses |+>, |-> as its
    first-factor Schmidt basis. Inputs already in canonical form map to u =
    v = 1.
    """
    gamma = pure_state(gamma)
    c = gamma.reshape(2, 2)
    values, vectors = eig_hermitian(c @ dagger(c))
    if values[1] - values[0] <= SCHMIDT_TOL:
        u1, u2 = KET_PLUS, KET_MINUS
    else:
        u1 = fix_phase(vectors[:, 1])
        u2 = fix_phase(vectors[:, 0])
    w1 = dagger(c) @ u1
    w2 = dagger(c) @ u2
    v1 = w1 / np.linalg.norm(w1)
    w = _complement(v1)
    if np.linalg.norm(w2) > SCHMIDT_TOL:
        phase = np.vdot(w, w2)
        v2 = w * (phase / abs(phase))
    else:
        det_u = np.linalg.det(np.column_stack([u1, u2]))
        det_v = np.linalg.det(np.column_stack([v1, w]))
        v2 = w * (det_u / det_v)
    u = np.outer(KET_PLUS, u1.conj()) + np.outer(KET_MINUS, u2.conj())
    v = np.outer(KET_MINUS, v1) - np.outer(KET_PLUS, v2)
    # a^2 - b^2 from the reduced spectrum keeps p accurate near q = 1
    q, p, _, _ = schmidt_weights(
        2.0 * abs(np.linalg.det(c)), max(0.0, float(values[1] - values[0]))
    )
    return CanonicalGamma(
        q=q,
        p=p,
        u_local=u,
        v_local=v,
        gamma_input=gamma,
    )


GAMMA8 = _frozen(0.5 * (pauli_product(2, 2) - pauli_product(3, 3)))
GAMMA9 = _frozen(0.5 * (pauli_product(2, 3) + pauli_product(3, 2)))


@dataclass(frozen=True)
class GammaBasis:
    q: float
    gamma: np.ndarray
    projector: np.ndarray
    support: np.ndarray
    pt_support: Optional[np.ndarray]
    gammas: tuple

    def __len__(self):
        return len(self.gammas)

    def restrict(self, a):
        """Write a 4x4 operator in the orthonormal support basis (3x3)."""
        return dagger(self.support) @ a @ self.support

    def embed(self, a):
        return self.support @ a @ dagger(self.support)

    def coefficients(self, h):
        return np.array(
            [np.sum(g * h.T).real / np.sum(g * g.T).real for g in self.gammas]
        )

    def expand(self, coefficients):
        return sum(x * g for x, g in zip(coefficients, self.gammas))


def _trace_inner(a, b):
    return np.sum(a * b.T).real


def gamma_basis(cg):
    """Orthogonal operator basis for the support of 1 - gamma, in the
    canonical frame of `cg`.

    Order is Gamma_1 = P3, six traceless elements from Gram-Schmidt on the
    compressed Pauli basis, then the two fixed elements Gamma_8, Gamma_9.
    """
    q, p, a, b = schmidt_weights(cg.q, cg.p)
    gamma = canonical_gamma_vector(q, p)
    p3 = np.eye(4, dtype=complex) - projector(gamma)

    support = np.column_stack(
        [
            np.kron(KET_PLUS, KET_PLUS),
            np.kron(KET_MINUS, KET_MINUS),
            b * np.kron(KET_PLUS, KET_MINUS) + a * np.kron(KET_MINUS, KET_PLUS),
        ]
    )
    pt_support = None
    if q <= SCHMIDT_TOL:
        pt_support = np.column_stack(
            [
                np.kron(KET_PLUS, KET_PLUS),
                np.kron(KET_PLUS, KET_MINUS),
                np.kron(KET_MINUS, KET_PLUS),
            ]
        )

    fixed = [p3, np.array(GAMMA8), np.array(GAMMA9)]
    found = []
    for e in pauli_basis()[1:]:
        x = p3 @ e @ p3
        # reorthogonalize once
        for _ in range(2):
            for g in fixed + found:
                x = x - g * (_trace_inner(g, x) / _trace_inner(g, g))
        norm = fro_norm(x)
        if norm > GS_TOL * fro_norm(e):
            found.append(hermitian(x * (SQRT2 / norm)))
        if len(found) == 6:
            break
    return GammaBasis(
        q=q,
        gamma=gamma,
        projector=p3,
        support=support,
        pt_support=pt_support,
        gammas=tuple([p3] + found + [fixed[1], fixed[2]]),
    )
