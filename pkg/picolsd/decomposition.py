"""The result of a decomposition and the witness built from its dual blocks.

Shared by the decomposer and the verifier; nothing here depends on either.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from picolsd.errors import SeparableInput
from picolsd.linalg import dagger, hermitian
from picolsd.qubits import concurrence, fix_phase, partial_transpose_1


class CaseTag(Enum):
    SEPARABLE = "Separable"
    FULL_RANK = "FullRank"
    RANK3_ENTANGLED = "Rank3EntangledGamma"
    RANK3_PRODUCT = "Rank3ProductGamma"
    RANK3_ANALYTIC = "Rank3ProductGammaAnalytic"

    def __str__(self):
        return self.value

    @property
    def is_rank3(self):
        return self in (
            CaseTag.RANK3_ENTANGLED,
            CaseTag.RANK3_PRODUCT,
            CaseTag.RANK3_ANALYTIC,
        )

    @property
    def is_product(self):
        return self in (CaseTag.RANK3_PRODUCT, CaseTag.RANK3_ANALYTIC)


class Witness(NamedTuple):
    w: np.ndarray
    case: CaseTag


@dataclass(frozen=True)
class LsdDecomposition:
    """All matrices are 4x4. z1, z3 are embedded from the support of rho and
    z2 from the support of the partial-transposed constraint block. For
    non-product cases a and b are None; gamma8 and gamma9 are set only for the
    product-gamma cases."""

    case: CaseTag
    separability: float
    rho_sep: np.ndarray
    rho_pure: np.ndarray
    pure_vector: Optional[np.ndarray]
    z1: np.ndarray
    z2: np.ndarray
    z3: np.ndarray
    support: np.ndarray
    witness: Optional[np.ndarray] = None
    a: Optional[float] = None
    b: Optional[float] = None
    theta: Optional[float] = None
    gamma8: Optional[np.ndarray] = None
    gamma9: Optional[np.ndarray] = None
    solution: object = None
    residuals: object = None

    @property
    def S(self):
        return self.separability

    def transformed(self, u):
        """Conjugate every operator by u (X -> u X u^dagger)."""

        def rot(x):
            return None if x is None else hermitian(u @ x @ dagger(u))

        return replace(
            self,
            rho_sep=rot(self.rho_sep),
            rho_pure=rot(self.rho_pure),
            pure_vector=None
            if self.pure_vector is None
            else fix_phase(u @ self.pure_vector),
            z1=rot(self.z1),
            z2=rot(self.z2),
            z3=rot(self.z3),
            support=rot(self.support),
            witness=rot(self.witness),
            gamma8=rot(self.gamma8),
            gamma9=rot(self.gamma9),
        )


def assemble_witness(z1, z2, support, a=None, b=None, gamma8=None, gamma9=None):
    """Z1 + P Z2^T1 P (+ a Gamma8 + b Gamma9)."""
    w = z1 + support @ partial_transpose_1(z2) @ support
    if a is not None:
        w = w + a * gamma8 + b * gamma9
    return hermitian(w)


def extract_witness(dec):
    if dec.case is CaseTag.SEPARABLE:
        raise SeparableInput("a separable state has no entanglement witness")
    w = dec.witness
    if w is None:
        w = assemble_witness(
            dec.z1, dec.z2, dec.support, dec.a, dec.b, dec.gamma8, dec.gamma9
        )
    return Witness(w, dec.case)


def entanglement_measure(dec):
    if dec.case is CaseTag.SEPARABLE or dec.pure_vector is None:
        return 0.0
    return (1.0 - dec.separability) * concurrence(dec.pure_vector)
