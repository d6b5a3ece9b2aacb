"""Deterministic test-state generators. Every generator takes a seed and draws
from its own numpy Generator."""
import numpy as np

from picolsd.errors import InvalidParam
from picolsd.logging import logger
from picolsd.qubits import (
    KET_MINUS,
    KET_PLUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    canonical_gamma_vector,
    is_ppt,
    projector,
)

MAX_TRIES = 1000


def _rng(seed):
    return np.random.default_rng(seed)


def _normalize(rho):
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_vector(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_unitary(rng, dim):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def werner_state(p):
    if not 0.0 <= p <= 1.0:
        raise InvalidParam("Werner weight must lie in [0, 1], got {}".format(p))
    return p * projector(PSI_MINUS) + (1.0 - p) * np.eye(4, dtype=complex) / 4.0


def bell_state():
    return projector(PHI_PLUS)


def random_density(rank, seed):
    if rank not in (1, 2, 3, 4):
        raise InvalidParam("rank must be 1..4, got {}".format(rank))
    rng = _rng(seed)
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    return _normalize(g @ g.conj().T)


def random_product_state(seed):
    rng = _rng(seed)
    return projector(np.kron(random_vector(rng, 2), random_vector(rng, 2)))


def random_separable(n_terms, seed):
    if n_terms < 1:
        raise InvalidParam("need at least one term, got {}".format(n_terms))
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        rho += w * projector(np.kron(random_vector(rng, 2), random_vector(rng, 2)))
    return _normalize(rho)


def random_local_unitary(seed):
    rng = _rng(seed)
    return np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))


def maximally_entangled_vector(theta):
    """cos(theta/2)|phi+> - sin(theta/2)|psi+>, the pure part of the analytic
    product-gamma class."""
    return np.cos(theta / 2.0) * PHI_PLUS - np.sin(theta / 2.0) * PSI_PLUS


def _product_gamma_separable(rng, n_terms):
    # Products |-> x b and a x |+> are orthogonal to |+-> and have vanishing
    # sigma_2, sigma_3 expectations on the fixed factor.
    weights = rng.dirichlet(np.ones(2 * n_terms))
    rho = np.zeros((4, 4), dtype=complex)
    for k, w in enumerate(weights):
        if k % 2 == 0:
            v = np.kron(KET_MINUS, random_vector(rng, 2))
        else:
            v = np.kron(random_vector(rng, 2), KET_PLUS)
        rho += w * projector(v)
    return rho


def rank3_product_gamma_state(weight, theta, seed=0, n_terms=3, rotate=False):
    """weight * sigma_sep + (1 - weight) * |v(theta)><v(theta)| with sigma_sep
    a rank-3 separable state orthogonal to |+->.

    With rotate=True the result is conjugated by a random local unitary.
    """
    if not 0.0 < weight < 1.0:
        raise InvalidParam("weight must lie in (0, 1), got {}".format(weight))
    rng = _rng(seed)
    sep = _product_gamma_separable(rng, n_terms)
    rho = weight * sep + (1.0 - weight) * projector(maximally_entangled_vector(theta))
    if rotate:
        lu = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))
        rho = lu @ rho @ lu.conj().T
    return _normalize(rho)


def random_rank3_product_gamma(seed):
    rng = _rng(seed)
    weight = float(rng.uniform(0.3, 0.9))
    theta = float(rng.uniform(-np.pi, np.pi))
    return rank3_product_gamma_state(
        weight, theta, seed=int(rng.integers(2 ** 31)), rotate=True
    )


def random_rank3_entangled_gamma(seed, min_concurrence=0.05):
    """A random rank-3 NPT state whose kernel is an entangled pure state."""
    rng = _rng(seed)
    for _ in range(MAX_TRIES):
        q = float(rng.uniform(min_concurrence, 1.0))
        lu = np.kron(haar_unitary(rng, 2), haar_unitary(rng, 2))
        gamma = lu @ canonical_gamma_vector(q)
        p3 = np.eye(4, dtype=complex) - projector(gamma)
        g = p3 @ (rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3)))
        rho = _normalize(g @ g.conj().T)
        if not is_ppt(rho):
            return rho
    logger.debug("no NPT rank-3 state after {} tries".format(MAX_TRIES))
    raise InvalidParam("could not draw an entangled rank-3 state")
