"""Dense complex linear-algebra substrate for chains of p-dimensional cyclic sites.

Tensor-factor ordering convention
---------------------------------
Site 1 is the RIGHTMOST Kronecker factor of the p^N-dimensional space, so a
product of embedded operators reads in the same order as the site-ordered
operator products used elsewhere in the package (site N leftmost).  Every
module in this package relies on this ordering; do not mix conventions.

All storage is dense complex128.  Problem sizes are small by design
(p^N <= 27 in the shipped benchmarks); a configurable cap rejects
accidentally huge instances before a Kronecker product can explode.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

DIM_CAP = 4096


class EigenSolveError(RuntimeError):
    """Dense eigensolve failed to converge or produced bad residuals."""


def weyl_pair(p: int, p_prime: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Return the cyclic Weyl pair (X, Z) on a p-dimensional site.

    X|m> = q^m |m> and Z|m> = |m+1 mod p>, with q = exp(-eta) and
    eta = 2*pi*i*p_prime/p, so that X Z = q Z X and X^p = Z^p = 1.

    p must be odd and >= 3; p_prime must be coprime to p.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"site dimension p must be odd and >= 3, got {p}")
    if math.gcd(p_prime, p) != 1:
        raise ValueError(f"p_prime={p_prime} is not coprime to p={p}")
    q = np.exp(-2j * np.pi * p_prime / p)
    x = np.diag(q ** np.arange(p)).astype(np.complex128)
    z = np.zeros((p, p), dtype=np.complex128)
    for m in range(p):
        z[(m + 1) % p, m] = 1.0
    return x, z


def embed(op: np.ndarray, site: int, n_sites: int, dim_cap: int = DIM_CAP) -> np.ndarray:
    """Embed a single-site operator into the N-site space (identity elsewhere).

    Site 1 is the rightmost tensor factor: the result is
    I_{p^(N-site)} (x) op (x) I_{p^(site-1)}.
    """
    p = op.shape[0]
    if op.shape != (p, p):
        raise ValueError(f"site operator must be square, got shape {op.shape}")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    if p**n_sites > dim_cap:
        raise ValueError(f"total dimension {p}^{n_sites} exceeds cap {dim_cap}")
    left = np.eye(p ** (n_sites - site), dtype=np.complex128)
    right = np.eye(p ** (site - 1), dtype=np.complex128)
    return np.kron(np.kron(left, op), right)


def eig_dense(m: np.ndarray, residual_tol: float = 1e-10):
    """Eigenpairs of a general (non-normal) complex matrix.

    Returns (eigenvalues, eigenvectors) with eigenvectors as columns.  Every
    pair is validated: ||m v - w v|| / (||m|| ||v||) must not exceed
    residual_tol, otherwise EigenSolveError is raised.  LAPACK convergence
    failures are re-raised with context instead of returning silently.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    try:
        w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(
            f"QR iteration did not converge for dim {m.shape[0]}: {exc}"
        ) from exc
    scale = np.linalg.norm(m, ord=2)
    if scale == 0.0:
        return w, v
    resid = np.linalg.norm(m @ v - v * w[None, :], axis=0)
    rel = resid / (scale * np.linalg.norm(v, axis=0))
    worst = float(rel.max())
    if worst > residual_tol:
        raise EigenSolveError(
            f"eigenpair residual {worst:.3e} exceeds tolerance {residual_tol:.1e}"
        )
    return w, v


def det_lu(m: np.ndarray) -> complex:
    """Determinant via LU with partial pivoting; singular input returns 0."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    with warnings.catch_warnings():
        # exactly singular input is a valid det=0 result, not a warning
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m.copy(), check_finite=True)
    diag = np.diag(lu)
    # parity of the pivot permutation
    sign = 1.0 if np.sum(piv != np.arange(len(piv))) % 2 == 0 else -1.0
    return complex(sign * np.prod(diag))


@dataclass(eq=False)
class BlockMatrix2:
    """A 2x2 matrix in auxiliary space whose entries are D x D operators."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        dim = self.a.shape[0]
        for blk in (self.a, self.b, self.c, self.d):
            if blk.shape != (dim, dim):
                raise ValueError("all four blocks must share one square shape")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __matmul__(self, other: "BlockMatrix2") -> "BlockMatrix2":
        return BlockMatrix2(
            a=self.a @ other.a + self.b @ other.c,
            b=self.a @ other.b + self.b @ other.d,
            c=self.c @ other.a + self.d @ other.c,
            d=self.c @ other.b + self.d @ other.d,
        )

    def trace_aux(self) -> np.ndarray:
        """Partial trace over the 2-dim auxiliary space."""
        return self.a + self.d

    def to_full(self) -> np.ndarray:
        """Flatten to a 2D x 2D matrix (auxiliary space leftmost)."""
        return np.block([[self.a, self.b], [self.c, self.d]])

    def aux_first(self) -> np.ndarray:
        """This operator on the first of two auxiliary spaces: T (x) 1."""
        z = np.zeros_like(self.a)
        return np.block(
            [
                [self.a, z, self.b, z],
                [z, self.a, z, self.b],
                [self.c, z, self.d, z],
                [z, self.c, z, self.d],
            ]
        )

    def aux_second(self) -> np.ndarray:
        """This operator on the second of two auxiliary spaces: 1 (x) T."""
        z = np.zeros_like(self.a)
        return np.block(
            [
                [self.a, self.b, z, z],
                [self.c, self.d, z, z],
                [z, z, self.a, self.b],
                [z, z, self.c, self.d],
            ]
        )


def scalar_on_quantum(m4: np.ndarray, dim: int) -> np.ndarray:
    """Lift a 4x4 auxiliary-space scalar matrix to aux (x) quantum: m4 (x) I."""
    return np.kron(m4, np.eye(dim, dtype=np.complex128))


def rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Max-norm residual of lhs - rhs, scaled by the larger operand."""
    scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1e-300)
    return float(np.abs(lhs - rhs).max() / scale)
