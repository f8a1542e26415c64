"""Finite Laurent polynomials in e^u with evenly spaced exponents.

Everything spectral in this package is a Laurent polynomial of e^u (or of
e^{pu}): transfer-matrix eigenvalue curves have exponents -N..N spaced by 2,
the averaged functions live on exponents -pN..pN spaced by 2p.  A
LaurentPoly stores the coefficient per exponent and supports exact
evaluation, differentiation and coefficient extraction from point samples.

Two node families are available for extraction:

* ``unit`` nodes u_j = x0 + 2*pi*i*j/(n*spacing) turn the Vandermonde system
  into a scaled DFT (condition number ~1); used for scalar fits where
  coefficient accuracy matters down to 1e-12.
* ``real`` nodes {0, +h, -h, +2h, ...} with h = 0.5/spacing; condition is
  monitored and the spread widened when two nodes nearly coincide.  Matches
  the sampling used for the conserved-charge extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class FitError(RuntimeError):
    """Sample set too ill-conditioned, or reconstruction check failed."""


def _unit_nodes(n: int, spacing: int, x0: float) -> np.ndarray:
    return x0 + 2j * np.pi * np.arange(n) / (n * spacing)


def _real_nodes(n: int, spacing: int, h: float) -> np.ndarray:
    out = [0.0]
    k = 1
    while len(out) < n:
        out.append(k * h / spacing)
        if len(out) < n:
            out.append(-k * h / spacing)
        k += 1
    return np.array(out, dtype=np.complex128)


@dataclass(frozen=True)
class LaurentPoly:
    """Sum over r of coeffs[r] * exp((min_deg + spacing*r) * u)."""

    min_deg: int
    spacing: int
    coeffs: np.ndarray = field(repr=False)

    @property
    def max_deg(self) -> int:
        return self.min_deg + self.spacing * (len(self.coeffs) - 1)

    @property
    def exponents(self) -> np.ndarray:
        return self.min_deg + self.spacing * np.arange(len(self.coeffs))

    def __call__(self, u):
        u = np.asarray(u, dtype=np.complex128)
        phase = np.exp(np.multiply.outer(u, self.exponents.astype(np.complex128)))
        val = phase @ self.coeffs
        return complex(val) if u.ndim == 0 else val

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly(self.min_deg, self.spacing, self.coeffs * self.exponents)

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def trailing(self) -> complex:
        return complex(self.coeffs[0])

    def scale(self) -> float:
        return float(np.abs(self.coeffs).max())


def fit_laurent(
    fn: Callable[[complex], complex],
    max_deg: int,
    spacing: int,
    min_deg: int | None = None,
    nodes: str = "unit",
    x0: float = 0.19,
    check_tol: float | None = 1e-9,
) -> LaurentPoly:
    """Recover Laurent coefficients of fn from point samples.

    fn must be (numerically) a Laurent polynomial with exponents
    min_deg, min_deg+spacing, ..., max_deg.  min_deg defaults to -max_deg.
    With check_tol set, the fit is validated against fn at a held-out point
    and FitError is raised on disagreement.
    """
    if min_deg is None:
        min_deg = -max_deg
    n = (max_deg - min_deg) // spacing + 1
    if min_deg + spacing * (n - 1) != max_deg:
        raise ValueError("max_deg - min_deg must be a multiple of spacing")

    if nodes == "unit":
        u = _unit_nodes(n, spacing, x0)
    elif nodes == "real":
        h = 0.5
        for _ in range(6):
            u = _real_nodes(n, spacing, h)
            v = np.exp(np.multiply.outer(u * spacing, np.arange(n)))
            if np.linalg.cond(v) < 1e8:
                break
            h *= 1.6
        else:
            raise FitError("real sample nodes remain ill-conditioned after widening")
    else:
        raise ValueError(f"unknown node family {nodes!r}")

    samples = np.array([fn(uj) for uj in u], dtype=np.complex128)
    rhs = samples * np.exp(-u * min_deg)
    v = np.exp(np.multiply.outer(u * spacing, np.arange(n)))
    coeffs = np.linalg.solve(v, rhs)
    poly = LaurentPoly(min_deg, spacing, coeffs)

    if check_tol is not None:
        u_star = x0 + 0.4131 / spacing + 0.2793j / spacing
        ref = fn(u_star)
        got = poly(u_star)
        scale = max(abs(ref), float(np.abs(samples).max()), 1e-300)
        if abs(got - ref) > check_tol * scale:
            raise FitError(
                f"held-out reconstruction error {abs(got - ref) / scale:.3e} "
                f"exceeds {check_tol:.1e}; wrong degree/spacing or non-polynomial input"
            )
    return poly


def fit_matrix_laurent(
    fn: Callable[[complex], np.ndarray],
    max_deg: int,
    spacing: int,
    check_tol: float | None = 1e-9,
) -> list[np.ndarray]:
    """Matrix-valued variant of fit_laurent on symmetric exponents.

    Returns the coefficient matrices ordered from exponent -max_deg up to
    +max_deg.  Uses the real symmetric node family.
    """
    min_deg = -max_deg
    n = 2 * max_deg // spacing + 1
    h = 0.5
    for _ in range(6):
        u = _real_nodes(n, spacing, h)
        v = np.exp(np.multiply.outer(u * spacing, np.arange(n)))
        if np.linalg.cond(v) < 1e8:
            break
        h *= 1.6
    else:
        raise FitError("real sample nodes remain ill-conditioned after widening")

    samples = np.array([fn(uj) for uj in u])  # (n, D, D)
    dim = samples.shape[1]
    rhs = samples.reshape(n, dim * dim) * np.exp(-u * min_deg)[:, None]
    coeffs = np.linalg.solve(v, rhs).reshape(n, dim, dim)
    mats = [coeffs[r] for r in range(n)]

    if check_tol is not None:
        u_star = 0.2793
        ref = fn(u_star)
        exps = min_deg + spacing * np.arange(n)
        got = sum(m * np.exp(e * u_star) for m, e in zip(mats, exps))
        scale = max(float(np.abs(ref).max()), 1e-300)
        if float(np.abs(got - ref).max()) > check_tol * scale:
            raise FitError("held-out reconstruction of matrix Laurent fit failed")
    return mats
