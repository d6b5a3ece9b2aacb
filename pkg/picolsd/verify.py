"""Independent certification of a decomposition.

Nothing here trusts the solver: every residual is recomputed from the input
state and the parts of the decomposition (separable part, pure part, dual
blocks and witness), so reports read back from disk can be checked as well.
"""
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from picolsd.decomposition import CaseTag, assemble_witness, extract_witness
from picolsd.errors import WrongCase
from picolsd.linalg import eig_hermitian, fro_norm, hermitian
from picolsd.qubits import partial_transpose_1

DEFAULT_SAMPLES = 10000
GRID_POINTS = 20

SUM_TOL = 1e-8
EIG_TOL = 1e-8
PURE_RANK_TOL = 1e-7
WK_TOL = 1e-6
WITNESS_TOL = 1e-6
WITNESS_TRACE_TOL = 1e-7
BARELY_TOL = 1e-7
AB_TOL = 1e-9


@dataclass(frozen=True)
class WkReport:
    sum_residual: float
    s_trace_residual: float
    sep_min_eig: float
    sep_pt_min_eig: float
    pure_min_eig: float
    pure_second_eig: float
    wk1_residual: float = 0.0
    wk2_residual: float = 0.0
    z3_identity_residual: float = 0.0
    slackness_residual: float = 0.0
    witness_min_over_samples: Optional[float] = None
    witness_trace_residual: Optional[float] = None
    witness_shift_min_eig: Optional[float] = None
    mu_hat: Optional[float] = None
    alpha_hat: Optional[float] = None
    ab_norm_residual: Optional[float] = None
    n_samples: int = 0
    passed: bool = False

    def failures(self, case):
        """Names of the fields outside their thresholds for `case`."""
        bad = []

        def check(name, ok):
            if not ok:
                bad.append(name)

        check("sum_residual", self.sum_residual <= SUM_TOL)
        check("s_trace_residual", self.s_trace_residual <= SUM_TOL)
        check("sep_min_eig", self.sep_min_eig >= -EIG_TOL)
        check("sep_pt_min_eig", self.sep_pt_min_eig >= -EIG_TOL)
        check("pure_min_eig", self.pure_min_eig >= -EIG_TOL)
        check("pure_second_eig", self.pure_second_eig <= PURE_RANK_TOL)
        if case is CaseTag.SEPARABLE:
            return bad
        check("barely_separable", self.sep_pt_min_eig <= BARELY_TOL)
        check("wk1_residual", self.wk1_residual <= WK_TOL)
        check("wk2_residual", self.wk2_residual <= WK_TOL)
        check("z3_identity_residual", self.z3_identity_residual <= WK_TOL)
        check("slackness_residual", self.slackness_residual <= WK_TOL)
        check(
            "witness_min_over_samples",
            self.witness_min_over_samples is not None
            and self.witness_min_over_samples >= -WITNESS_TOL,
        )
        check(
            "witness_trace_residual",
            self.witness_trace_residual is not None
            and self.witness_trace_residual <= WITNESS_TRACE_TOL,
        )
        check(
            "witness_shift_min_eig",
            self.witness_shift_min_eig is not None
            and self.witness_shift_min_eig >= -EIG_TOL,
        )
        if case is CaseTag.RANK3_ANALYTIC:
            check(
                "ab_norm_residual",
                self.ab_norm_residual is not None
                and self.ab_norm_residual <= AB_TOL,
            )
        return bad

    def to_dict(self):
        return asdict(self)


def _relative(x, ref):
    n = fro_norm(ref)
    return fro_norm(x) / n if n > 0.0 else fro_norm(x)


def check_validity(rho, dec):
    if np.shape(rho) != np.shape(dec.rho_sep) or np.shape(rho) != np.shape(
        dec.rho_pure
    ):
        raise WrongCase("decomposition does not match the state dimension")
    pure_values = eig_hermitian(dec.rho_pure).values
    return dict(
        sum_residual=fro_norm(dec.rho_sep + dec.rho_pure - rho),
        s_trace_residual=abs(np.trace(dec.rho_sep).real - dec.separability),
        sep_min_eig=float(eig_hermitian(dec.rho_sep).values[0]),
        sep_pt_min_eig=float(eig_hermitian(partial_transpose_1(dec.rho_sep)).values[0]),
        pure_min_eig=float(pure_values[0]),
        pure_second_eig=float(pure_values[-2]),
    )


def _wk(rho, dec):
    w = extract_witness(dec).w
    wk1 = _relative(w @ dec.rho_pure + dec.rho_pure, dec.rho_pure)
    z2 = dec.z2
    wk2 = fro_norm(partial_transpose_1(rho - dec.rho_pure) @ z2) / max(
        1.0, fro_norm(z2)
    )
    return wk1, wk2


def check_wk_full(rho, dec):
    """(Z1 + Z2^T1) rho_pure = -rho_pure and (rho - rho_pure)^T1 Z2 = 0."""
    if dec.case is not CaseTag.FULL_RANK:
        raise WrongCase("expected a full-rank decomposition, got {}".format(dec.case))
    return _wk(rho, dec)


def check_wk_rank3(rho, dec):
    """As check_wk_full with Z2^T1 compressed to the support of rho."""
    if dec.case is not CaseTag.RANK3_ENTANGLED:
        raise WrongCase(
            "expected an entangled-gamma decomposition, got {}".format(dec.case)
        )
    return _wk(rho, dec)


def check_wk_rank3_product(rho, dec):
    """Product-gamma equations; returns (wk1, wk2, |a^2 + b^2 - 1|).

    For the closed-form case the dual blocks must vanish, which is folded
    into wk2.
    """
    if not dec.case.is_product:
        raise WrongCase(
            "expected a product-gamma decomposition, got {}".format(dec.case)
        )
    wk1, wk2 = _wk(rho, dec)
    if dec.case is CaseTag.RANK3_ANALYTIC:
        wk2 = max(wk2, fro_norm(dec.z1), fro_norm(dec.z2))
    return wk1, wk2, abs(dec.a ** 2 + dec.b ** 2 - 1.0)


def check_slackness_and_z3(rho, dec):
    """Returns (slackness, z3_identity).

    The primal slack blocks are rho_sep, rho_sep^T1 and rho - rho_sep, paired
    with Z1, Z2 and Z3; on rank-3 supports the Frobenius norms agree with
    those of the compressed blocks.
    """
    rho_sep = dec.rho_sep
    slack = np.sqrt(
        fro_norm(rho_sep @ dec.z1) ** 2
        + fro_norm(partial_transpose_1(rho_sep) @ dec.z2) ** 2
        + fro_norm((rho - rho_sep) @ dec.z3) ** 2
    )
    w = assemble_witness(
        dec.z1, dec.z2, dec.support, dec.a, dec.b, dec.gamma8, dec.gamma9
    )
    z3 = fro_norm(dec.z3 - w - dec.support)
    return float(slack), float(z3)


def _random_qubits(x):
    v = x[:, 0:2] + 1j * x[:, 2:4]
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _grid_qubits(n):
    theta = np.linspace(0.0, np.pi, n)
    phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    t, p = t.ravel(), p.ravel()
    return np.column_stack([np.cos(t / 2.0), np.exp(1j * p) * np.sin(t / 2.0)])


def _perpendicular(g):
    """Unit vectors b with <b|g> = 0, row-wise; zero rows where g vanishes."""
    b = np.column_stack([-np.conj(g[:, 1]), np.conj(g[:, 0])])
    norm = np.linalg.norm(b, axis=1, keepdims=True)
    return np.where(norm > 1e-12, b / np.where(norm > 1e-12, norm, 1.0), 0.0)


def _expectations(w4, a, b):
    """<a b|W|a b> for paired rows of a and b."""
    return np.einsum("ni,nj,ijkl,nk,nl->n", a.conj(), b.conj(), w4, a, b).real


def _grid_expectations(w4, a, b):
    """<a b|W|a b> for every a in `a` and b in `b`."""
    wa = np.einsum("ai,ijkl,ak->ajl", a.conj(), w4, a)
    return np.einsum("bj,ajl,bl->ab", b.conj(), wa, b).real


def check_witness(w, rho, separability, n_samples, seed, gamma=None):
    """Minimum of tr{W sigma} over product states sigma, and tr{W rho}.

    Haar-random product states are drawn from a generator seeded with `seed`
    (a prefix of a larger run sees the same states) and a 20^4 Bloch grid is
    added. With `gamma` only product states orthogonal to gamma are sampled:
    for each first (second) factor the other factor is the unique state
    completing an orthogonal product.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    w = hermitian(w)
    w4 = w.reshape(2, 2, 2, 2)
    rng = np.random.default_rng(seed)
    draws = rng.normal(size=(n_samples, 8))
    a = _random_qubits(draws[:, 0:4])
    b = _random_qubits(draws[:, 4:8])
    grid = _grid_qubits(GRID_POINTS)

    if gamma is None:
        sampled = _expectations(w4, a, b)
        gridded = _grid_expectations(w4, grid, grid)
        low = min(sampled.min(), gridded.min())
    else:
        c = np.asarray(gamma, dtype=complex).reshape(2, 2)
        lows = []
        for first, fit in ((a, "b"), (b, "a"), (grid, "b"), (grid, "a")):
            if fit == "b":
                other = _perpendicular(first.conj() @ c)
                pairs = (first, other)
            else:
                other = _perpendicular(first.conj() @ c.T)
                pairs = (other, first)
            keep = np.linalg.norm(other, axis=1) > 0.0
            if np.any(keep):
                lows.append(_expectations(w4, pairs[0][keep], pairs[1][keep]).min())
        low = min(lows)
    trace = float(np.sum(w * np.asarray(rho).T).real)
    return float(low), trace


def certify(rho, dec, n_samples=DEFAULT_SAMPLES, seed=0, gamma=None):
    """Full report for `dec`; `gamma` restricts the witness sampling to the
    support of a rank-3 state."""
    rho = hermitian(rho)
    fields = check_validity(rho, dec)
    if dec.case is CaseTag.SEPARABLE:
        report = WkReport(**fields)
        return WkReport(**{**asdict(report), "passed": not report.failures(dec.case)})

    if dec.case is CaseTag.FULL_RANK:
        wk1, wk2 = check_wk_full(rho, dec)
    elif dec.case is CaseTag.RANK3_ENTANGLED:
        wk1, wk2 = check_wk_rank3(rho, dec)
    else:
        wk1, wk2, ab = check_wk_rank3_product(rho, dec)
        fields["ab_norm_residual"] = ab
    slack, z3 = check_slackness_and_z3(rho, dec)
    w = extract_witness(dec).w
    if dec.case.is_rank3 and gamma is None:
        gamma = eig_hermitian(dec.support).vectors[:, 0]
    low, trace = check_witness(w, rho, dec.separability, n_samples, seed, gamma)

    v = dec.pure_vector
    alpha_hat = None if v is None else float(abs(np.vdot(v, w @ v)))
    tr_z2 = np.trace(dec.z2).real
    mu_hat = float(np.trace(dec.z1).real / tr_z2) if tr_z2 > 1e-12 else None

    report = WkReport(
        **fields,
        wk1_residual=float(wk1),
        wk2_residual=float(wk2),
        z3_identity_residual=z3,
        slackness_residual=slack,
        witness_min_over_samples=low,
        witness_trace_residual=abs(trace - (dec.separability - 1.0)),
        witness_shift_min_eig=float(eig_hermitian(w + np.eye(4)).values[0]),
        mu_hat=mu_hat,
        alpha_hat=alpha_hat,
        n_samples=int(n_samples),
    )
    return WkReport(**{**asdict(report), "passed": not report.failures(dec.case)})
