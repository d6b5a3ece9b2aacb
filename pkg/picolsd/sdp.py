"""Primal-dual interior point solver for small block-diagonal Hermitian SDPs.

Primal: minimize c.x subject to F(x) = F0 + sum_i x_i F_i >= 0.
Dual:   maximize -tr{F0 Z} subject to tr{F_i Z} = c_i, Z >= 0.

The search direction is the HKM direction with a Mehrotra predictor-corrector
choice of the centering parameter. Iterates may start dual infeasible; the
equality residual is driven to zero by the Newton steps.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from picolsd.errors import (
    CannotCenter,
    DimMismatch,
    InfeasibleStart,
    InvalidMatrix,
    InvalidParam,
    LinalgError,
    MaxIterError,
    NumericalFailure,
    SingularSystem,
)
from picolsd.linalg import (
    SINGULAR_TOL,
    dagger,
    eig_hermitian,
    fro_norm,
    solve_hermitian_linear,
)
from picolsd.logging import logger

CENTER_MIN_EIG = 1e-3
CENTER_MAX_SHIFTS = 50
WEAK_DUALITY_TOL = 1e-12
STALL_STEP = 1e-12
REGULARIZATION = 1e-12
REGULARIZATION_RETRIES = 3
NEIGHBORHOOD = 1e-2
BACKTRACK = 0.5
BACKTRACK_STEPS = 40


class Status(Enum):
    OPTIMAL = "Optimal"
    MAX_ITER = "MaxIter"
    NUMERICAL_FAILURE = "NumericalFailure"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BlockLayout:
    dims: Tuple[int, ...]

    def __post_init__(self):
        if not self.dims or any(int(d) < 1 for d in self.dims):
            raise DimMismatch("block dimensions must be positive: {}".format(self.dims))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def total(self):
        return sum(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for b in blocks:
        d = b.shape[0]
        out[k : k + d, k : k + d] = b
        k += d
    return out


def split_blocks(a, layout):
    """Inverse of block_diag for a dense matrix conforming to `layout`."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (layout.total, layout.total):
        raise DimMismatch("matrix {} does not fit layout {}".format(a.shape, layout))
    out = []
    k = 0
    for d in layout:
        out.append(a[k : k + d, k : k + d].copy())
        k += d
    return tuple(out)


def _herm(a):
    return 0.5 * (a + dagger(a))


@dataclass(frozen=True)
class SdpProblem:
    """Canonical-form problem data.

    `f0` holds one (n_b, n_b) array per block; `f` holds one (m, n_b, n_b)
    stack per block, so that f[b][i] is block b of F_i.
    """

    f0: Tuple[np.ndarray, ...]
    f: Tuple[np.ndarray, ...]
    c: np.ndarray
    layout: BlockLayout

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        if c.size < 1:
            raise DimMismatch("an SDP needs at least one variable")
        f0 = tuple(np.asarray(b, dtype=complex) for b in self.f0)
        f = tuple(np.asarray(b, dtype=complex) for b in self.f)
        if len(f0) != len(self.layout) or len(f) != len(self.layout):
            raise DimMismatch(
                "block count does not match layout {}".format(self.layout)
            )
        for d, b0, bs in zip(self.layout, f0, f):
            if b0.shape != (d, d) or bs.shape != (c.size, d, d):
                raise DimMismatch(
                    "block data does not match layout {}".format(self.layout)
                )
        if not np.all(np.isfinite(c)) or not all(
            np.all(np.isfinite(b)) for b in f0 + f
        ):
            raise InvalidMatrix("problem data has non-finite entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "f", f)

    @classmethod
    def from_blocks(cls, f0, fs, c):
        """Build from F0 as a list of blocks and each F_i as a list of blocks."""
        layout = BlockLayout(tuple(np.shape(b)[0] for b in f0))
        stacks = tuple(
            np.stack([np.asarray(fi[k], dtype=complex) for fi in fs])
            for k in range(len(layout))
        )
        return cls(f0=tuple(f0), f=stacks, c=c, layout=layout)

    @property
    def m(self):
        return self.c.size

    def affine(self, x):
        """The primal slack blocks F(x)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.m,):
            raise DimMismatch("expected {} variables, got {}".format(self.m, x.shape))
        return tuple(
            b0 + np.einsum("i,ijk->jk", x, bs) for b0, bs in zip(self.f0, self.f)
        )

    def direction(self, dx):
        return tuple(np.einsum("i,ijk->jk", dx, bs) for bs in self.f)

    def traces(self, z):
        """The vector tr{F_i Z}."""
        self._check_blocks(z)
        return sum(np.einsum("ijk,kj->i", bs, zb).real for bs, zb in zip(self.f, z))

    def objective_dual(self, z):
        self._check_blocks(z)
        return -sum(np.trace(b0 @ zb).real for b0, zb in zip(self.f0, z))

    def _check_blocks(self, z):
        if len(z) != len(self.layout) or any(
            np.shape(zb) != (d, d) for d, zb in zip(self.layout, z)
        ):
            raise DimMismatch("blocks do not match layout {}".format(self.layout))

    def gram(self):
        """G_ij = tr{F_i F_j}."""
        return sum(np.einsum("ijk,lkj->il", bs, bs).real for bs in self.f)

    def dense(self, blocks):
        return block_diag(blocks)


@dataclass(frozen=True)
class SolverConfig:
    tol_gap: float = 1e-9
    tol_feas: float = 1e-9
    tol_slack: float = 1e-8
    max_iter: int = 200
    step_fraction: float = 0.98
    initial_x: Optional[np.ndarray] = None
    initial_z: Optional[Tuple[np.ndarray, ...]] = None

    def __post_init__(self):
        if not (self.tol_gap > 0 and self.tol_feas > 0 and self.tol_slack > 0):
            raise InvalidParam("solver tolerances must be positive")
        if not 0.0 < self.step_fraction < 1.0:
            raise InvalidParam("step fraction must lie in (0, 1)")
        if self.max_iter < 1:
            raise InvalidParam("max_iter must be positive")

    def with_start(self, x, z):
        return SolverConfig(
            tol_gap=self.tol_gap,
            tol_feas=self.tol_feas,
            tol_slack=self.tol_slack,
            max_iter=self.max_iter,
            step_fraction=self.step_fraction,
            initial_x=x,
            initial_z=z,
        )


class DualResiduals(NamedTuple):
    primal_min_eig: float
    dual_min_eig: float
    eq_residual_max: float
    gap: float
    slackness_norm: float


@dataclass(frozen=True)
class SdpSolution:
    x: np.ndarray
    z: Tuple[np.ndarray, ...]
    s: Tuple[np.ndarray, ...]
    p_star: float
    d_star: float
    gap: float
    iterations: int
    status: Status
    history: Tuple[float, ...] = field(default=())
    residuals: Optional[DualResiduals] = None

    @property
    def ok(self):
        return self.status is Status.OPTIMAL

    def raise_for_status(self):
        if self.status is Status.MAX_ITER:
            raise MaxIterError(
                "no convergence after {} iterations (gap {:.3e})".format(
                    self.iterations, self.gap
                ),
                solution=self,
            )
        if self.status is Status.NUMERICAL_FAILURE:
            raise NumericalFailure(
                "solver failed after {} iterations (gap {:.3e})".format(
                    self.iterations, self.gap
                ),
                solution=self,
            )
        return self


def dual_residuals(prob, x, z):
    s = prob.affine(x)
    z = tuple(np.asarray(b, dtype=complex) for b in z)
    eq = prob.traces(z) - prob.c
    return DualResiduals(
        primal_min_eig=min(float(eig_hermitian(b).values[0]) for b in s),
        dual_min_eig=min(float(eig_hermitian(b).values[0]) for b in z),
        eq_residual_max=float(np.max(np.abs(eq))),
        gap=float(sum(np.trace(sb @ zb).real for sb, zb in zip(s, z))),
        slackness_norm=float(
            np.sqrt(sum(fro_norm(sb @ zb) ** 2 for sb, zb in zip(s, z)))
        ),
    )


def _min_block_eig(blocks):
    return min(float(eig_hermitian(b).values[0]) for b in blocks)


def _least_squares_x(prob, t):
    # minimize ||F(x) - t 1||_F over x
    rhs = prob.traces(tuple(t * np.eye(d) - b0 for d, b0 in zip(prob.layout, prob.f0)))
    return solve_hermitian_linear(prob.gram(), rhs)


def feasible_start(prob, hint_x=None, hint_z=None, strict=False):
    """Strictly interior starting points (x0, Z0).

    Hints are used when they are interior. Otherwise x0 is the least-squares
    fit of F(x) to t*1 and Z0 is the least-norm solution of the dual
    equalities shifted by t*1, with t doubled until every block has smallest
    eigenvalue at least 1e-3. With strict=True a non-interior hint raises
    InfeasibleStart instead of being replaced.
    """
    x0 = None
    if hint_x is not None:
        hint_x = np.asarray(hint_x, dtype=float)
        if _min_block_eig(prob.affine(hint_x)) > 0.0:
            x0 = hint_x
        elif strict:
            raise InfeasibleStart("primal hint is not strictly feasible")
        else:
            logger.debug("primal hint is not interior, centering instead")
    if x0 is None:
        t = 1.0
        for _ in range(CENTER_MAX_SHIFTS):
            x = _least_squares_x(prob, t)
            if _min_block_eig(prob.affine(x)) >= CENTER_MIN_EIG:
                x0 = x
                break
            t *= 2.0
        else:
            raise CannotCenter("no strictly feasible primal point found")

    z0 = None
    if hint_z is not None:
        hint_z = tuple(_herm(np.asarray(b, dtype=complex)) for b in hint_z)
        prob._check_blocks(hint_z)
        if _min_block_eig(hint_z) > 0.0:
            z0 = hint_z
        elif strict:
            raise InfeasibleStart("dual hint is not strictly feasible")
        else:
            logger.debug("dual hint is not interior, centering instead")
    if z0 is None:
        y = solve_hermitian_linear(prob.gram(), prob.c)
        base = prob.direction(y)
        t = 1.0
        for _ in range(CENTER_MAX_SHIFTS):
            z = tuple(_herm(b) + t * np.eye(d) for d, b in zip(prob.layout, base))
            if _min_block_eig(z) >= CENTER_MIN_EIG:
                z0 = z
                break
            t *= 2.0
        else:
            raise CannotCenter("no strictly feasible dual point found")
    return x0, z0


def _inverse(spectrum):
    values, vectors = spectrum
    return (vectors / values) @ dagger(vectors)


def _sqrt(spectrum):
    values, vectors = spectrum
    return (vectors * np.sqrt(values)) @ dagger(vectors)


def _inverse_sqrt(spectrum):
    values, vectors = spectrum
    return (vectors / np.sqrt(values)) @ dagger(vectors)


def _positive(spectra):
    return all(sp.values[0] > 0.0 for sp in spectra)


def _max_step(spectra, deltas):
    """Largest alpha keeping X + alpha*dX positive definite, per block."""
    alpha = np.inf
    for spectrum, d in zip(spectra, deltas):
        if spectrum.values[0] <= 0.0:
            return 0.0
        r = _inverse_sqrt(spectrum)
        lam = eig_hermitian(_herm(r @ d @ r)).values[0]
        if lam < 0.0:
            alpha = min(alpha, -1.0 / lam)
    return alpha


def _gap(s, z):
    return float(sum(np.trace(sb @ zb).real for sb, zb in zip(s, z)))


def _slackness(s, z):
    return float(np.sqrt(sum(fro_norm(sb @ zb) ** 2 for sb, zb in zip(s, z))))


def _centrality(s_spec, z, mu):
    """lambda_min(S^1/2 Z S^1/2) / mu; 1 on the central path."""
    low = np.inf
    for sp, zb in zip(s_spec, z):
        r = _sqrt(sp)
        low = min(low, float(eig_hermitian(_herm(r @ zb @ r)).values[0]))
    return low / mu


def _trial_centrality(prob, x, z):
    """Centrality of (x, z), or None if either iterate is not positive
    definite."""
    s = prob.affine(x)
    try:
        s_spec = tuple(eig_hermitian(sb) for sb in s)
        z_spec = tuple(eig_hermitian(zb) for zb in z)
    except LinalgError:
        return None
    if not (_positive(s_spec) and _positive(z_spec)):
        return None
    mu = _gap(s, z) / prob.layout.total
    if not mu > 0.0:
        return None
    return _centrality(s_spec, z, mu)


def _neighborhood_step(prob, x, z, dx, dz, ap, ad, floor):
    """Shorten both steps until the new iterate stays positive definite with
    centrality at least `floor`. Returns None once the steps collapse."""
    for _ in range(BACKTRACK_STEPS):
        if max(ap, ad) < STALL_STEP:
            break
        x_new = x + ap * dx
        z_new = tuple(_herm(zb + ad * dzb) for zb, dzb in zip(z, dz))
        c = _trial_centrality(prob, x_new, z_new)
        if c is not None and c >= floor:
            return x_new, z_new, ap, ad
        ap, ad = BACKTRACK * ap, BACKTRACK * ad
    return None


def _schur_complement(prob, s_inv, z):
    m = np.zeros((prob.m, prob.m))
    for bs, si, zb in zip(prob.f, s_inv, z):
        g = np.einsum("kl,jlm,mn->jkn", si, bs, zb)
        m += np.einsum("ikn,jnk->ij", bs, g).real
    return 0.5 * (m + m.T)


def _factor(m):
    """Spectrum of the Schur complement, regularized if it is singular."""
    scale = max(1.0, fro_norm(m))
    shifted = m
    for k in range(REGULARIZATION_RETRIES + 1):
        spectrum = eig_hermitian(shifted)
        if np.min(np.abs(spectrum.values)) > SINGULAR_TOL * fro_norm(shifted):
            return shifted, spectrum
        if k == REGULARIZATION_RETRIES:
            break
        delta = 10.0 ** k * REGULARIZATION * scale
        logger.warning(
            "Schur complement singular, regularizing by {:.1e}".format(delta)
        )
        shifted = m + delta * np.eye(m.shape[0])
    raise SingularSystem("Schur complement singular after regularization")


def _direction(prob, factor, s_inv, z, r, r_dual):
    rhs = sum(np.einsum("ijk,kj->i", bs, rb).real for bs, rb in zip(prob.f, r))
    matrix, spectrum = factor
    dx = solve_hermitian_linear(matrix, rhs - r_dual, spectrum)
    ds = prob.direction(dx)
    dz = tuple(_herm(rb - si @ dsb @ zb) for rb, si, dsb, zb in zip(r, s_inv, ds, z))
    return dx, ds, dz


def _solution(prob, x, z, iterations, status, history):
    s = prob.affine(x)
    try:
        residuals = dual_residuals(prob, x, z)
    except LinalgError:
        residuals = None
    return SdpSolution(
        x=x,
        z=z,
        s=s,
        p_star=float(prob.c @ x),
        d_star=float(prob.objective_dual(z)),
        gap=_gap(s, z),
        iterations=iterations,
        status=status,
        history=tuple(history),
        residuals=residuals,
    )


def _converged(cfg, gap, r_dual, slack):
    return (
        gap <= cfg.tol_gap
        and np.max(np.abs(r_dual)) <= cfg.tol_feas
        and slack <= cfg.tol_slack
    )


def _certify(solution, cfg):
    res = solution.residuals
    good = res is not None and (
        res.gap <= cfg.tol_gap
        and res.eq_residual_max <= cfg.tol_feas
        and res.slackness_norm <= cfg.tol_slack
        and res.primal_min_eig >= -cfg.tol_feas
        and res.dual_min_eig >= -cfg.tol_feas
    )
    if good:
        return solution
    logger.warning("post-hoc residual check failed: {}".format(res))
    return replace(solution, status=Status.NUMERICAL_FAILURE)


def _newton_step(prob, cfg, s, z, s_spec, z_spec, r_dual, mu):
    """Mehrotra predictor-corrector; returns (dx, dz, ap, ad, sigma)."""
    n = prob.layout.total
    s_inv = tuple(_inverse(sp) for sp in s_spec)
    factor = _factor(_schur_complement(prob, s_inv, z))

    # predictor
    r = tuple(-zb for zb in z)
    dx, ds, dz = _direction(prob, factor, s_inv, z, r, r_dual)
    ap = min(1.0, cfg.step_fraction * _max_step(s_spec, ds))
    ad = min(1.0, cfg.step_fraction * _max_step(z_spec, dz))
    mu_aff = (
        sum(
            np.trace((sb + ap * dsb) @ (zb + ad * dzb)).real
            for sb, dsb, zb, dzb in zip(s, ds, z, dz)
        )
        / n
    )
    sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3

    # corrector
    r = tuple(
        sigma * mu * si - zb - si @ dsb @ dzb
        for si, zb, dsb, dzb in zip(s_inv, z, ds, dz)
    )
    dx, ds, dz = _direction(prob, factor, s_inv, z, r, r_dual)
    ap = min(1.0, cfg.step_fraction * _max_step(s_spec, ds))
    ad = min(1.0, cfg.step_fraction * _max_step(z_spec, dz))
    return dx, dz, ap, ad, sigma


def solve(prob, cfg=None):
    """Solve `prob`; the returned solution carries its status rather than
    raising on MaxIter or NumericalFailure (see raise_for_status).

    Iterates stay in a neighborhood of the central path, so a small gap
    also means a small ||F(x) Z||; the stopping rule asks for both.
    """
    cfg = cfg or SolverConfig()
    x, z = feasible_start(prob, cfg.initial_x, cfg.initial_z, strict=True)
    x = np.array(x, dtype=float)
    n = prob.layout.total
    history = []

    def failure(it, mesg):
        logger.warning("{} at iteration {}".format(mesg, it))
        return _solution(prob, x, z, it, Status.NUMERICAL_FAILURE, history)

    for it in range(cfg.max_iter):
        s = prob.affine(x)
        try:
            s_spec = tuple(eig_hermitian(sb) for sb in s)
            z_spec = tuple(eig_hermitian(zb) for zb in z)
        except LinalgError as e:
            return failure(it, str(e))
        if not (_positive(s_spec) and _positive(z_spec)):
            return failure(it, "iterate left the positive definite cone")
        gap = _gap(s, z)
        if gap < -WEAK_DUALITY_TOL:
            return failure(it, "weak duality violated")
        r_dual = prob.c - prob.traces(z)
        slack = _slackness(s, z)
        history.append(gap)
        if _converged(cfg, gap, r_dual, slack):
            return _certify(_solution(prob, x, z, it, Status.OPTIMAL, history), cfg)

        mu = gap / n
        try:
            dx, dz, ap, ad, sigma = _newton_step(
                prob, cfg, s, z, s_spec, z_spec, r_dual, mu
            )
            floor = min(NEIGHBORHOOD, 0.5 * _centrality(s_spec, z, mu))
        except LinalgError as e:
            return failure(it, str(e))
        step = _neighborhood_step(prob, x, z, dx, dz, ap, ad, floor)
        if step is None:
            return failure(it, "step lengths collapsed")
        x, z, ap, ad = step
        logger.debug(
            "iter {:3d} gap {:.3e} slack {:.3e} sigma {:.3e} "
            "steps {:.3f} {:.3f}".format(it, gap, slack, sigma, ap, ad)
        )

    s = prob.affine(x)
    r_dual = prob.c - prob.traces(z)
    if _converged(cfg, _gap(s, z), r_dual, _slackness(s, z)):
        sol = _solution(prob, x, z, cfg.max_iter, Status.OPTIMAL, history)
        return _certify(sol, cfg)
    return _solution(prob, x, z, cfg.max_iter, Status.MAX_ITER, history)
