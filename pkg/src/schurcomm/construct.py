"""Explicit model matrices and tensor lifts.

The model family at size m: an exponentially graded diagonal d_j = e^{-j},
an antisymmetric coupling v with v_jk = 1 / ((k - j)(e^{-j} + e^{-k})), and
their doubled block forms a (off-diagonal +-v) and b (diagonal d, -d). The
point of the coupling: the commutator [b, a] collapses to the Hilbert-type
matrix with entries 1/(k - j), whose operator norm stays below pi at every
size, while divided-difference multipliers acting on it can be made large.

Tensor lifts x -> x (x) I and x -> x (x) diag(x0) transport a multiplier on
an n-point spectrum into any symmetric ideal while controlling norms through
the disjoint-copy estimates of the x0 block family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_option
from .errors import InvalidInputError, SizeLimitError
from .schur import DiagonalOperator, commutator, schur_apply
from .symnorm import (
    SingularValueSequence,
    SymmetricNormSpec,
    decreasing_rearrangement,
    singular_values,
    symmetric_norm,
    verify_block_family,
)

__all__ = [
    "ModelMatrices",
    "TensorLift",
    "build_model_matrices",
    "commutator_ba",
    "make_tensor_lift",
    "verify_intertwining",
    "verify_norm_sandwich",
    "SandwichReport",
]


@dataclass(frozen=True)
class ModelMatrices:
    """The size-m model family: diagonal d, coupling v, block forms a and b."""

    m: int
    d: DiagonalOperator  # diag(e^-1 .. e^-m)
    v: np.ndarray        # antisymmetric, zero diagonal
    a: np.ndarray        # [[0, v], [-v, 0]], real symmetric
    b: DiagonalOperator  # diag(d, -d)


def build_model_matrices(m: int) -> ModelMatrices:
    """Build the model family; the norm estimates need m >= 3."""
    m = int(m)
    if m < 3:
        raise InvalidInputError(f"model matrices need m >= 3, got {m}")
    if 2 * m > get_option("size_cap"):
        raise SizeLimitError(f"2m = {2*m} exceeds the dense size cap {get_option('size_cap')}")
    j = np.arange(1, m + 1, dtype=float)
    dvals = np.exp(-j)
    gap = j[None, :] - j[:, None]          # k - j
    pair = dvals[:, None] + dvals[None, :]  # e^-j + e^-k
    off = gap != 0.0
    v = np.where(off, 1.0 / (np.where(off, gap, 1.0) * pair), 0.0)
    a = np.block([[np.zeros((m, m)), v], [-v, np.zeros((m, m))]])
    b = DiagonalOperator(np.concatenate([dvals, -dvals]))
    return ModelMatrices(m=m, d=DiagonalOperator(dvals), v=v, a=a, b=b)


def commutator_ba(mm: ModelMatrices) -> np.ndarray:
    """[b, a]; its diagonal blocks vanish and the off-diagonal blocks are
    the Hilbert-type matrix with entries 1/(k - j)."""
    return commutator(mm.b.matrix(), mm.a)


@dataclass(frozen=True)
class TensorLift:
    """The pair of lifts from n x n matrices into (n * len(x0))-sized ones."""

    n: int
    x0: SingularValueSequence

    @property
    def k(self) -> int:
        """Output dimension."""
        return self.n * len(self.x0)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("lift size must be positive")

    def _check(self, x: np.ndarray):
        if x.ndim != 2 or x.shape != (self.n, self.n):
            raise InvalidInputError(f"lift expects an {self.n}x{self.n} matrix, got {x.shape}")
        if self.k > get_option("size_cap"):
            raise SizeLimitError(
                f"lifted dimension {self.k} exceeds the dense size cap {get_option('size_cap')}"
            )

    def phi(self, x) -> np.ndarray:
        """x tensor identity; preserves diagonality and self-adjointness."""
        x = np.asarray(x)
        self._check(x)
        return np.kron(x, np.eye(len(self.x0)))

    def psi(self, x) -> np.ndarray:
        """x tensor diag(x0); singular values are the products s_i(x) * x0_k."""
        x = np.asarray(x)
        self._check(x)
        return np.kron(x, np.diag(self.x0.values))

    def phi_diag(self, b: DiagonalOperator) -> DiagonalOperator:
        """phi restricted to diagonal operators, kept in eigenvalue form.

        Repeated eigenvalues are exact copies of the input floats, so
        exact-equality spectrum grouping downstream stays exact.
        """
        if b.n != self.n:
            raise InvalidInputError(f"lift expects spectrum size {self.n}, got {b.n}")
        return DiagonalOperator(np.kron(b.eigenvalues, np.ones(len(self.x0))))


def make_tensor_lift(n: int, x0) -> TensorLift:
    n = int(n)
    if n < 1:
        raise InvalidInputError("lift size must be positive")
    x0 = x0 if isinstance(x0, SingularValueSequence) else decreasing_rearrangement(x0)
    if len(x0) == 0 or float(x0.values.sum()) == 0.0:
        raise InvalidInputError("x0 must be a nonzero nonnegative sequence")
    lift = TensorLift(n=n, x0=x0)
    if lift.k > get_option("size_cap"):
        raise SizeLimitError(
            f"lifted dimension {lift.k} exceeds the dense size cap {get_option('size_cap')}"
        )
    return lift


def verify_intertwining(lift: TensorLift, f, b: DiagonalOperator, x) -> float:
    """Frobenius residual of psi(M_b(x)) = M_{phi(b)}(psi(x)).

    Exact in exact arithmetic: the lifted divided-difference table is the
    original one with entries repeated, so both sides multiply the same
    psi values into the same tensor entries.
    """
    x = np.asarray(x)
    lhs = lift.psi(schur_apply(f, b, x))
    rhs = schur_apply(f, lift.phi_diag(b), lift.psi(x))
    return float(np.linalg.norm(lhs - rhs))


@dataclass
class SandwichReport:
    mode: str
    eps: float
    reference_norm: float
    lifted_norm: float
    lower: float
    upper: float
    passed: bool


def verify_norm_sandwich(
    lift: TensorLift,
    spec: SymmetricNormSpec,
    x,
    eps: float,
    mode: str,
) -> tuple[bool, SandwichReport]:
    """Check the two-sided lift estimate for one matrix.

    mode="sup":  ||x||_inf <= ||psi(x)||_spec <= (1+eps) ||x||_inf
    mode="sum":  (1-eps) ||x||_1 <= ||psi(x)||_spec <= ||x||_1

    Precondition: the (spec, x0, n, eps, mode) block family must verify;
    otherwise the estimate has no backing and InvalidInputError is raised.
    """
    ok, fam = verify_block_family(spec, lift.x0, lift.n, eps, mode)
    if not ok:
        raise InvalidInputError(
            f"block family check failed for {spec.label} "
            f"(joint norm {fam.joint_norm!r} outside [{fam.lower_required!r}, {fam.upper_required!r}])"
        )
    x = np.asarray(x)
    s = singular_values(x).values
    lifted = symmetric_norm(spec, lift.psi(x))
    tol = 1e-9
    if mode == "sup":
        ref = float(s[0])
        lower, upper = ref, (1.0 + eps) * ref
    else:
        ref = float(s.sum())
        lower, upper = (1.0 - eps) * ref, ref
    passed = lifted >= lower - tol * max(1.0, lower) and lifted <= upper + tol * max(1.0, upper)
    report = SandwichReport(
        mode=mode,
        eps=eps,
        reference_norm=ref,
        lifted_norm=lifted,
        lower=lower,
        upper=upper,
        passed=passed,
    )
    return passed, report
