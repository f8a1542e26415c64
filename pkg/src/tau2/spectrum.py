"""Exact-diagonalization oracle: eigenvalue curves of the commuting family.

The transfer matrix is diagonalized once at a generic anchor point; because
the family commutes and the anchor spectrum is simple, every eigenvector is
shared by t(u) for all u, so each eigenvalue curve can be read off as a
component ratio of t(u) v against v.  Curves are stored as exact Laurent
polynomials (degree N, exponent step 2), which turns quasi-periodicity and
asymptotics checks into algebra on coefficients.

Curve ordering is (sector k, Re at anchor, Im at anchor); the anchor default
0.3 + 0.1i is an arbitrary generic point away from the model's symmetry
axes, with fallbacks tried on degeneracy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import eig_dense
from .laurent import LaurentPoly, fit_laurent
from .model import ModelConfig, require_valid
from .transfer import charge_q, sector_index, transfer

DEFAULT_ANCHOR = 0.3 + 0.1j
ANCHOR_FALLBACKS = (0.3 + 0.1j, 0.17 + 0.23j, -0.41 + 0.07j, 0.53 - 0.19j)


class DegenerateAnchorError(RuntimeError):
    """The anchor spectrum has a near-degenerate pair; pick another u0."""


class EigenvectorDriftError(RuntimeError):
    """Component ratios of t(u) v disagree; the anchor was near-degenerate."""


def diagonalize_at(config: ModelConfig, u0: complex = DEFAULT_ANCHOR):
    """Eigenpairs of t(u0) with their charge sectors.

    Returns (eigenvalues, eigenvectors, sectors); raises
    DegenerateAnchorError when the spectral gap is too small to trust the
    eigenvectors as members of the commuting family's common eigenbasis.
    """
    require_valid(config)
    t0 = transfer(u0, config)
    w, v = eig_dense(t0)
    order = np.lexsort((w.imag, w.real))
    w, v = w[order], v[:, order]
    diffs = np.abs(np.subtract.outer(w, w))
    np.fill_diagonal(diffs, np.inf)
    gap = float(diffs.min())
    scale = np.linalg.norm(t0, ord=2)
    if gap < 1e-6 * scale:
        raise DegenerateAnchorError(
            f"eigenvalue gap {gap:.3e} below 1e-6 * ||t(u0)|| = {1e-6 * scale:.3e} "
            f"at u0={u0}; retry with a different anchor"
        )
    sectors = np.array([sector_index(v[:, i], config) for i in range(len(w))])
    return w, v, sectors


@dataclass(eq=False)
class SpectrumCurve:
    """One eigenvalue curve of the commuting family."""

    sector: int
    poly: LaurentPoly
    anchor_u: complex
    anchor_value: complex
    index: int
    eigenvector: np.ndarray = field(repr=False)

    def __call__(self, u):
        return self.poly(u)

    @property
    def leading(self) -> complex:
        return self.poly.leading

    @property
    def trailing(self) -> complex:
        return self.poly.trailing


def eigenvalue_curve(config: ModelConfig, eigenvector: np.ndarray,
                     anchor_u: complex, ratio_tol: float = 1e-8) -> LaurentPoly:
    """Fit the Laurent curve u -> Lambda(u) carried by one common eigenvector.

    Lambda(u) is the largest-component ratio (t(u) v)_m / v_m; all components
    with non-negligible weight must yield the same ratio, otherwise the
    eigenvector has drifted across a near-degeneracy and
    EigenvectorDriftError is raised.
    """
    v = eigenvector
    m = int(np.argmax(np.abs(v)))
    vmax = abs(v[m])
    mask = np.abs(v) >= 1e-6 * vmax

    def ratio(u: complex) -> complex:
        tv = transfer(u, config) @ v
        lam = tv[m] / v[m]
        dev = np.abs(tv[mask] - lam * v[mask]).max() / (abs(lam) * vmax + 1e-300)
        if dev > ratio_tol:
            raise EigenvectorDriftError(
                f"ratio inconsistency {dev:.3e} at u={u}; anchor near-degenerate"
            )
        return complex(lam)

    n = config.n_sites
    poly = fit_laurent(ratio, max_deg=n, spacing=2, nodes="unit", check_tol=None)
    # held-out validation at two generic points
    for u_star in (0.377 - 0.113j, -0.681 + 0.291j):
        ref = ratio(u_star + anchor_u.real)
        got = poly(u_star + anchor_u.real)
        if abs(got - ref) / max(abs(ref), 1e-300) > 1e-8:
            raise EigenvectorDriftError(
                f"Laurent fit fails held-out check at u={u_star}: {got} vs {ref}"
            )
    return poly


def spectrum_curves(config: ModelConfig, anchors=ANCHOR_FALLBACKS) -> list[SpectrumCurve]:
    """All p^N eigenvalue curves, ordered by (sector, Re, Im) at the anchor."""
    last = None
    for u0 in anchors:
        try:
            w, v, sectors = diagonalize_at(config, u0)
            curves = []
            for i in range(len(w)):
                poly = eigenvalue_curve(config, v[:, i], u0)
                curves.append((sectors[i], w[i], v[:, i], poly))
            break
        except (DegenerateAnchorError, EigenvectorDriftError) as err:
            last = err
    else:
        raise DegenerateAnchorError(f"all anchor candidates failed: {last}")

    curves.sort(key=lambda c: (c[0], round(c[1].real, 10), round(c[1].imag, 10)))
    return [
        SpectrumCurve(sector=int(k), poly=poly, anchor_u=u0,
                      anchor_value=complex(val), index=i, eigenvector=vec)
        for i, (k, val, vec, poly) in enumerate(curves)
    ]


def sector_populations(curves) -> dict[int, int]:
    pops: dict[int, int] = {}
    for c in curves:
        pops[c.sector] = pops.get(c.sector, 0) + 1
    return pops
