"""Two-qubit Lewenstein-Sanpera decomposition with the largest separable weight.

rho = S * rho_sep + (1 - S) * rho_pure with rho_sep separable and S maximal.
The weights are absorbed into the parts: rho_sep_tilde = S * rho_sep and
rho_pure_tilde = (1 - S) * rho_pure.

Full-rank states are encoded on the Pauli basis, rank-3 states on an operator
basis of the support of rho in the canonical frame of the pure state gamma
spanning the kernel of rho. Rank-3 states with product gamma first try the
closed-form solution and fall back to the SDP.
"""
import math
from dataclasses import replace
from typing import NamedTuple

import numpy as np

from picolsd import verify
from picolsd.decomposition import (
    CaseTag,
    LsdDecomposition,
    assemble_witness,
)
from picolsd.errors import (
    EntangledGamma,
    InvalidParam,
    NumericalFailure,
    ProductGamma,
    RankMismatch,
    UnsupportedRank,
)
from picolsd.linalg import dagger, eig_hermitian, hermitian, is_psd, rank_eps
from picolsd.logging import logger
from picolsd.qubits import (
    PHI_PLUS,
    PPT_TOL,
    PSI_PLUS,
    RANK_EPS,
    canonicalize_gamma,
    density_matrix,
    fix_phase,
    gamma_basis,
    is_ppt,
    orthogonal_pure_state,
    partial_transpose_1,
    pauli_basis,
    projector,
)
from picolsd.sdp import SdpProblem, SolverConfig, solve

PURE_SECOND_EIG_MAX = 1e-6
ANALYTIC_MIN_NORM = 1e-12

CASES = ("auto", "full", "rank3")


class Rank3Frame(NamedTuple):
    canonical: object
    basis: object
    local: np.ndarray


def rank3_frame(rho):
    """Canonical frame of the kernel of a rank-3 state: the canonical gamma,
    its operator basis and the local unitary taking rho into that frame."""
    cg = canonicalize_gamma(orthogonal_pure_state(rho))
    return Rank3Frame(canonical=cg, basis=gamma_basis(cg), local=cg.local)


def _check_rank(rho, expected):
    rank = rank_eps(rho, RANK_EPS)
    if rank != expected:
        raise RankMismatch("expected rank {}, got rank {}".format(expected, rank))


def encode_full_rank(rho):
    _check_rank(rho, 4)
    zero = np.zeros((4, 4), dtype=complex)
    fs = [
        [e / 4.0, partial_transpose_1(e) / 4.0, -e / 4.0] for e in pauli_basis()
    ]
    c = np.zeros(16)
    c[0] = -1.0
    return SdpProblem.from_blocks([zero, zero, hermitian(rho)], fs, c)


def _encode_rank3(rho, gb, m, middle):
    _check_rank(rho, 3)
    restrict = gb.restrict
    fs = [
        [restrict(g) / 3.0, middle(partial_transpose_1(g)) / 3.0, -restrict(g) / 3.0]
        for g in gb.gammas[:m]
    ]
    c = np.zeros(m)
    c[0] = -1.0
    d = fs[0][1].shape[0]
    f0 = [
        np.zeros((3, 3), dtype=complex),
        np.zeros((d, d), dtype=complex),
        hermitian(restrict(rho)),
    ]
    return SdpProblem.from_blocks(f0, fs, c)


def encode_rank3_entangled(rho, cg, gb):
    """Layout [3, 4, 3] over the nine basis operators; rho in the canonical
    frame of `cg`."""
    if cg.is_product:
        raise ProductGamma("gamma is a product state, use the product encoding")
    return _encode_rank3(rho, gb, 9, lambda x: x)


def encode_rank3_product(rho, gb):
    """Layout [3, 3, 3] over the first seven basis operators. The middle block
    is written on the support of the partial-transposed projector."""
    if gb.pt_support is None:
        raise EntangledGamma("gamma is entangled, use the entangled encoding")
    c = gb.pt_support
    return _encode_rank3(rho, gb, 7, lambda x: dagger(c) @ x @ c)


def _split_pure(rho, rho_sep_sdp):
    """Top eigenpair of rho - rho_sep; the remainder must be negligible."""
    values, vectors = eig_hermitian(rho - rho_sep_sdp)
    if values[-2] > PURE_SECOND_EIG_MAX:
        raise NumericalFailure(
            "pure part has second eigenvalue {:.3e}".format(values[-2])
        )
    weight = max(0.0, float(values[-1]))
    v = fix_phase(vectors[:, -1])
    rho_pure = weight * projector(v)
    return 1.0 - weight, hermitian(rho - rho_pure), rho_pure, v


def analytic_rank3_product(rho, gb):
    """Closed-form decomposition for product gamma, or None when the implied
    separable part is not a valid rank-3 PPT state. `rho` is in the canonical
    frame of `gb`."""
    g8 = float(np.sum(gb.gammas[-2] * rho.T).real)
    g9 = float(np.sum(gb.gammas[-1] * rho.T).real)
    norm = math.hypot(g8, g9)
    if norm <= ANALYTIC_MIN_NORM:
        logger.debug("analytic path: Gamma8 and Gamma9 components vanish")
        return None
    theta = math.atan2(-g9, -g8)
    v = math.cos(theta / 2.0) * PHI_PLUS - math.sin(theta / 2.0) * PSI_PLUS
    rho_pure = norm * projector(v)
    rho_sep = hermitian(rho - rho_pure)
    if not (
        is_psd(rho_sep, PPT_TOL)
        and is_ppt(rho_sep, PPT_TOL)
        and rank_eps(rho_sep, RANK_EPS) == 3
    ):
        logger.warning("analytic solution rejected, falling back to the SDP")
        return None
    a, b = math.cos(theta), math.sin(theta)
    gamma8, gamma9 = gb.gammas[-2], gb.gammas[-1]
    zero = np.zeros((4, 4), dtype=complex)
    witness = hermitian(a * gamma8 + b * gamma9)
    return LsdDecomposition(
        case=CaseTag.RANK3_ANALYTIC,
        separability=1.0 - norm,
        rho_sep=rho_sep,
        rho_pure=rho_pure,
        pure_vector=fix_phase(v),
        z1=zero,
        z2=zero.copy(),
        z3=hermitian(witness + gb.projector),
        support=gb.projector,
        witness=witness,
        a=a,
        b=b,
        theta=theta,
        gamma8=gamma8,
        gamma9=gamma9,
    )


def _solve(prob, cfg, x0, z0):
    return solve(prob, (cfg or SolverConfig()).with_start(x0, z0)).raise_for_status()


def _decompose_full_rank(rho, cfg):
    prob = encode_full_rank(rho)
    x0 = np.zeros(16)
    x0[0] = 2.0 * eig_hermitian(rho).values[0]
    z0 = (np.eye(4), np.eye(4), 3.0 * np.eye(4))
    sol = _solve(prob, cfg, x0, z0)
    rho_sep = hermitian(sum(x * e for x, e in zip(sol.x, pauli_basis())) / 4.0)
    s, rho_sep, rho_pure, v = _split_pure(rho, rho_sep)
    z1, z2, z3 = (hermitian(z) for z in sol.z)
    support = np.eye(4, dtype=complex)
    return LsdDecomposition(
        case=CaseTag.FULL_RANK,
        separability=s,
        rho_sep=rho_sep,
        rho_pure=rho_pure,
        pure_vector=v,
        z1=z1,
        z2=z2,
        z3=z3,
        support=support,
        witness=assemble_witness(z1, z2, support),
        solution=sol,
    )


def _decompose_rank3_sdp(rho, cg, gb, cfg):
    product = cg.is_product
    if product:
        prob = encode_rank3_product(rho, gb)
        middle = gb.pt_support
        m = 7
    else:
        prob = encode_rank3_entangled(rho, cg, gb)
        middle = np.eye(4, dtype=complex)
        m = 9
    x0 = np.zeros(m)
    x0[0] = 1.5 * eig_hermitian(gb.restrict(rho)).values[0]
    d = middle.shape[1]
    z0 = (np.eye(3), np.eye(d), 3.0 * np.eye(3))
    sol = _solve(prob, cfg, x0, z0)

    rho_sep = hermitian(sum(x * g for x, g in zip(sol.x, gb.gammas)) / 3.0)
    s, rho_sep, rho_pure, v = _split_pure(rho, rho_sep)
    z1 = hermitian(gb.embed(sol.z[0]))
    z2 = hermitian(middle @ sol.z[1] @ dagger(middle))
    z3 = hermitian(gb.embed(sol.z[2]))
    p3 = gb.projector
    a = b = gamma8 = gamma9 = None
    case = CaseTag.RANK3_ENTANGLED
    if product:
        case = CaseTag.RANK3_PRODUCT
        gamma8, gamma9 = gb.gammas[-2], gb.gammas[-1]
        rest = z3 - z1 - p3 @ partial_transpose_1(z2) @ p3 - p3
        a = float(np.sum(gamma8 * rest.T).real / 2.0)
        b = float(np.sum(gamma9 * rest.T).real / 2.0)
    return LsdDecomposition(
        case=case,
        separability=s,
        rho_sep=rho_sep,
        rho_pure=rho_pure,
        pure_vector=v,
        z1=z1,
        z2=z2,
        z3=z3,
        support=p3,
        witness=assemble_witness(z1, z2, p3, a, b, gamma8, gamma9),
        a=a,
        b=b,
        gamma8=gamma8,
        gamma9=gamma9,
        solution=sol,
    )


def _separable(rho):
    zero = np.zeros((4, 4), dtype=complex)
    return LsdDecomposition(
        case=CaseTag.SEPARABLE,
        separability=1.0,
        rho_sep=rho,
        rho_pure=zero,
        pure_vector=None,
        z1=zero,
        z2=zero.copy(),
        z3=zero.copy(),
        support=np.eye(4, dtype=complex),
    )


def decompose(rho, cfg=None, case="auto", samples=None, seed=0, analytic=True):
    """Optimal decomposition of `rho`, certified by the verifier.

    `case` may assert the rank class ("full" or "rank3"); a mismatch raises
    RankMismatch. Separable states short-circuit through the PPT test. With
    analytic=False product-gamma states always go through the SDP.
    """
    if case not in CASES:
        raise InvalidParam("unknown case {!r}".format(case))
    rho = density_matrix(rho)
    rank = rank_eps(rho, RANK_EPS)
    if case == "full" and rank != 4:
        raise RankMismatch("expected a full-rank state, got rank {}".format(rank))
    if case == "rank3" and rank != 3:
        raise RankMismatch("expected a rank-3 state, got rank {}".format(rank))

    gamma = None
    if is_ppt(rho, PPT_TOL):
        logger.debug("state is PPT, short-circuiting to the separable case")
        dec = _separable(rho)
    elif rank == 4:
        dec = _decompose_full_rank(rho, cfg)
    elif rank == 3:
        frame = rank3_frame(rho)
        cg, gb, local = frame
        gamma = cg.gamma_input
        rho_c = hermitian(local @ rho @ dagger(local))
        dec = None
        if cg.is_product and analytic:
            dec = analytic_rank3_product(rho_c, gb)
        if dec is None:
            dec = _decompose_rank3_sdp(rho_c, cg, gb, cfg)
        dec = dec.transformed(dagger(local))
    else:
        raise UnsupportedRank(rank)

    logger.debug("case {}, S = {!r}".format(dec.case, dec.separability))
    report = verify.certify(
        rho,
        dec,
        n_samples=verify.DEFAULT_SAMPLES if samples is None else samples,
        seed=seed,
        gamma=gamma,
    )
    return replace(dec, residuals=report)
