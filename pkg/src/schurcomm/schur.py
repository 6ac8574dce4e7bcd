"""Divided-difference Schur multipliers on diagonal spectra.

For a real diagonal matrix b = diag(lam_1 .. lam_n) and a scalar function f,
the multiplier acts entrywise: entry (j, k) of the image is
psi(lam_j, lam_k) * x_jk with psi the divided difference of f.

Diagonal convention, stated prominently because it matters: psi(lam, lam) is
defined to be 0, not f'(lam). This changes the multiplier on matrices with
entries at equal-eigenvalue positions, but not the commutator identity
M([b, x]) = [f(b), x], because [b, x] itself vanishes wherever lam_j = lam_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidInputError, NoWitnessError
from .symnorm import SymmetricNormSpec, symmetric_norm

__all__ = [
    "DiagonalOperator",
    "DividedDifferenceSymbol",
    "BlowupWitness",
    "divided_difference",
    "schur_apply",
    "commutator",
    "verify_schur_commutator_identity",
    "multiplier_norm_lower_bound",
    "dual_witness_transfer",
    "group_spectrum",
]


def _fn(f) -> Callable:
    """Accept either a scalar-function object with a .value evaluator or a callable."""
    return getattr(f, "value", f)


@dataclass(frozen=True)
class DiagonalOperator:
    """A real diagonal matrix, stored as its eigenvalue list."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        if lam.ndim != 1 or lam.size < 1:
            raise InvalidInputError("eigenvalue list must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(lam)):
            raise InvalidInputError("eigenvalues must be finite reals")
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def matrix(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    def mapped(self, f) -> "DiagonalOperator":
        """The diagonal operator with eigenvalues f(lam_j)."""
        return DiagonalOperator(np.asarray(_fn(f)(self.eigenvalues), dtype=float))


def _psi_matrix(f, lam: np.ndarray) -> np.ndarray:
    fv = np.asarray(_fn(f)(lam), dtype=float)
    diff = lam[:, None] - lam[None, :]
    num = fv[:, None] - fv[None, :]
    same = diff == 0.0
    return np.where(same, 0.0, num / np.where(same, 1.0, diff))


@dataclass(frozen=True)
class DividedDifferenceSymbol:
    """Cached divided-difference table psi(lam_j, lam_k) for one spectrum.

    psi is exactly 0 on coincident pairs and symmetric for real-valued f.
    """

    eigenvalues: np.ndarray
    psi: np.ndarray

    @classmethod
    def build(cls, f, b: DiagonalOperator) -> "DividedDifferenceSymbol":
        psi = _psi_matrix(f, b.eigenvalues)
        psi.setflags(write=False)
        return cls(eigenvalues=b.eigenvalues, psi=psi)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != self.psi.shape:
            raise InvalidInputError(
                f"matrix shape {x.shape} does not match spectrum size {self.psi.shape[0]}"
            )
        return self.psi * x


def divided_difference(f, lam: float, mu: float) -> float:
    """(f(lam) - f(mu)) / (lam - mu), and exactly 0 when lam == mu."""
    if lam == mu:
        return 0.0
    fl = float(_fn(f)(lam))
    fm = float(_fn(f)(mu))
    return (fl - fm) / (lam - mu)


def schur_apply(f, b: DiagonalOperator, x) -> np.ndarray:
    """Apply the divided-difference multiplier of (f, b) to the matrix x."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidInputError("schur_apply expects a square matrix")
    if x.shape[0] != b.n:
        raise InvalidInputError(f"matrix is {x.shape[0]}x{x.shape[1]} but spectrum has {b.n} points")
    return _psi_matrix(f, b.eigenvalues) * x


def commutator(a, b) -> np.ndarray:
    """[a, b] = a b - b a."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError("commutator expects square matrices")
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def verify_schur_commutator_identity(f, b: DiagonalOperator, x) -> float:
    """Frobenius residual of M([b, x]) = [f(b), x].

    The identity is exact in exact arithmetic, so the residual is pure
    floating point noise: at most a few ulps of max|f| times the Frobenius
    norm of x.
    """
    x = np.asarray(x)
    lhs = schur_apply(f, b, commutator(b.matrix(), x))
    fb = b.mapped(f)
    rhs = commutator(fb.matrix(), x)
    return float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class BlowupWitness:
    """A matrix certifying a lower bound on a multiplier's induced norm."""

    diag: DiagonalOperator
    test_matrix: np.ndarray
    spec: SymmetricNormSpec
    ratio: float


def multiplier_norm_lower_bound(
    f,
    b: DiagonalOperator,
    witnesses: Sequence,
    spec: SymmetricNormSpec,
) -> BlowupWitness:
    """Best norm ratio ||M(x)|| / ||x|| over the supplied witnesses.

    The returned ratio is a certified lower bound on the induced norm of the
    multiplier on the ideal named by `spec`; the witness achieving it is
    returned alongside. Witnesses with zero norm are skipped; an all-zero
    list is an error.
    """
    if not witnesses:
        raise InvalidInputError("need at least one witness")
    symbol = DividedDifferenceSymbol.build(f, b)
    best = None
    best_ratio = -1.0
    seen_nonzero = False
    for x in witnesses:
        x = np.asarray(x)
        denom = symmetric_norm(spec, x)
        if denom == 0.0:
            continue
        seen_nonzero = True
        ratio = symmetric_norm(spec, symbol.apply(x)) / denom
        if ratio > best_ratio:
            best_ratio = ratio
            best = x
    if not seen_nonzero:
        raise InvalidInputError("all witnesses are zero")
    return BlowupWitness(diag=b, test_matrix=best, spec=spec, ratio=float(best_ratio))


def dual_witness_transfer(f, b: DiagonalOperator, x_inf) -> np.ndarray:
    """Turn an operator-norm witness into a trace-norm witness, exactly.

    With y = M(x_inf) and (u, v) a top singular pair of y, the rank-one
    matrix x1 = u v* has trace norm 1 and, by the trace duality
    <M(x), z> = <x, M(z)> (psi is real symmetric),

        ||M(x1)||_1 >= ||M(x_inf)||_inf / ||x_inf||_inf.

    When y is Hermitian or skew-Hermitian the top eigenvector w is used and
    x1 = w w*, which keeps the witness self-adjoint.
    """
    x_inf = np.asarray(x_inf)
    symbol = DividedDifferenceSymbol.build(f, b)
    y = symbol.apply(x_inf)
    if not np.any(y):
        raise NoWitnessError("the multiplier annihilates the supplied witness")
    scale = np.abs(y).max()
    herm = np.abs(y - y.conj().T).max() <= 1e-12 * scale
    skew = np.abs(y + y.conj().T).max() <= 1e-12 * scale
    if herm or skew:
        z = y if herm else -1j * y
        w, vecs = np.linalg.eigh(z)
        top = int(np.argmax(np.abs(w)))
        u = vecs[:, top]
        return np.outer(u, u.conj())
    u, _, vh = np.linalg.svd(y)
    return np.outer(u[:, 0], vh[0])


def group_spectrum(b: DiagonalOperator, tol: Optional[float] = None) -> list:
    """Partition spectrum indices into near-equal groups.

    Sorted single-linkage: consecutive eigenvalue gaps of at most `tol` merge.
    tol=0 groups exactly equal values. Default tol is 1e-12 times the largest
    magnitude. Returns [(representative, index_array), ...] ordered by value;
    the representative is the group mean.
    """
    lam = b.eigenvalues
    if tol is None:
        tol = 1e-12 * (np.abs(lam).max() if lam.size else 0.0)
    if tol < 0:
        raise InvalidInputError("tol must be nonnegative")
    order = np.argsort(lam, kind="stable")
    sorted_lam = lam[order]
    groups = []
    start = 0
    for i in range(1, lam.size + 1):
        if i == lam.size or sorted_lam[i] - sorted_lam[i - 1] > tol:
            idx = np.sort(order[start:i])
            groups.append((float(sorted_lam[start:i].mean()), idx))
            start = i
    return groups
