"""Monodromy and transfer matrices, conserved charges, and structural checks.

The one-row monodromy matrix is the ordered product T(u) = L_N(u) ... L_1(u)
in the 2-dim auxiliary space, with every L_n embedded on its own site
(site 1 rightmost, matching tau2.algebra.embed).  The transfer matrix is its
auxiliary-space trace t(u) = A(u) + D(u), a Laurent polynomial

    t(u) = e^{Nu} t_N + e^{(N-2)u} t_{N-1} + ... + e^{-Nu} t_0

whose N+1 coefficients are the commuting conserved charges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .algebra import BlockMatrix2, embed, rel_residual, scalar_on_quantum
from .laurent import fit_matrix_laurent
from .model import ModelConfig, l_operator, r_matrix, require_valid


@dataclass(frozen=True)
class ModelConstants:
    """Products of the site couplings along the chain."""

    d_plus: complex
    d_minus: complex
    f_plus: complex
    f_minus: complex
    g_plus: complex
    g_minus: complex
    h_plus: complex
    h_minus: complex


def constants(config: ModelConfig) -> ModelConstants:
    def prod(name):
        return complex(np.prod([getattr(s, name) for s in config.sites]))

    return ModelConstants(
        d_plus=prod("d_plus"), d_minus=prod("d_minus"),
        f_plus=prod("f_plus"), f_minus=prod("f_minus"),
        g_plus=prod("g_plus"), g_minus=prod("g_minus"),
        h_plus=prod("h_plus"), h_minus=prod("h_minus"),
    )


def monodromy(u: complex, config: ModelConfig) -> BlockMatrix2:
    """T(u) = L_N(u) L_{N-1}(u) ... L_1(u) with p^N x p^N blocks."""
    n = config.n_sites
    t = _embedded_l(u, n, config)
    for site in range(n - 1, 0, -1):
        t = t @ _embedded_l(u, site, config)
    return t


def _embedded_l(u: complex, site: int, config: ModelConfig) -> BlockMatrix2:
    loc = l_operator(u, site, config)
    n = config.n_sites
    return BlockMatrix2(
        a=embed(loc.a, site, n),
        b=embed(loc.b, site, n),
        c=embed(loc.c, site, n),
        d=embed(loc.d, site, n),
    )


def transfer(u: complex, config: ModelConfig) -> np.ndarray:
    """t(u) = A(u) + D(u), acting on the p^N-dimensional quantum space."""
    return monodromy(u, config).trace_aux()


@lru_cache(maxsize=32)
def _charge_cached(p: int, p_prime: int, n_sites: int) -> np.ndarray:
    q = np.exp(-2j * np.pi * p_prime / p)
    xdiag = q ** np.arange(p)
    full = reduce(np.kron, [xdiag] * n_sites)
    return np.diag(full).astype(np.complex128)


def charge_q(config: ModelConfig) -> np.ndarray:
    """The conserved charge: the product of X over all sites (diagonal)."""
    return _charge_cached(config.p, config.p_prime, config.n_sites)


def sector_index(eigvec: np.ndarray, config: ModelConfig, tol: float = 1e-8) -> int:
    """Charge sector k of an eigenvector: nearest q^k to its Rayleigh quotient."""
    qdiag = np.diag(charge_q(config))
    w = np.abs(eigvec) ** 2
    rayleigh = complex(np.sum(qdiag * w) / np.sum(w))
    qpow = config.q ** np.arange(config.p)
    k = int(np.argmin(np.abs(qpow - rayleigh)))
    drift = np.linalg.norm((qdiag - qpow[k]) * eigvec) / np.linalg.norm(eigvec)
    if drift > tol:
        raise ValueError(
            f"vector is not a charge eigenvector (sector drift {drift:.3e})"
        )
    return k


def laurent_charges(config: ModelConfig) -> list[np.ndarray]:
    """The conserved charges [t_0, ..., t_N] from samples of t(u).

    Extraction solves a Vandermonde system in e^{2u} over symmetric real
    nodes and verifies the reconstruction at a held-out point.
    """
    require_valid(config)
    n = config.n_sites
    mats = fit_matrix_laurent(lambda u: transfer(u, config), max_deg=n, spacing=2)
    return mats  # index r holds t_r, the coefficient of e^{(2r-N)u}


# ---------------------------------------------------------------------------
# Structural residuals (all relative, max-norm).

def rtt_residual(u: complex, v: complex, config: ModelConfig) -> float:
    """Exchange-relation residual of the monodromy matrix."""
    tu = monodromy(u, config)
    tv = monodromy(v, config)
    r = scalar_on_quantum(r_matrix(u - v, config.eta), config.dim)
    lhs = r @ tu.aux_first() @ tv.aux_second()
    rhs = tv.aux_second() @ tu.aux_first() @ r
    return rel_residual(lhs, rhs)


def commutativity_residual(u: complex, v: complex, config: ModelConfig) -> float:
    tu, tv = transfer(u, config), transfer(v, config)
    comm = tu @ tv - tv @ tu
    scale = max(np.abs(tu).max() * np.abs(tv).max(), 1e-300)
    return float(np.abs(comm).max() / scale)


def quasi_periodicity_residual(u: complex, config: ModelConfig) -> float:
    """t(u + i*pi) = (-1)^N t(u), entrywise."""
    lhs = transfer(u + 1j * np.pi, config)
    rhs = (-1) ** config.n_sites * transfer(u, config)
    return rel_residual(lhs, rhs)


def charge_commutation_residual(u: complex, config: ModelConfig) -> float:
    t = transfer(u, config)
    qmat = charge_q(config)
    comm = qmat @ t - t @ qmat
    scale = max(np.abs(t).max(), 1e-300)  # |Q| entries are unimodular
    return float(np.abs(comm).max() / scale)


def charge_power_residual(config: ModelConfig) -> float:
    qmat = charge_q(config)
    return rel_residual(np.linalg.matrix_power(qmat, config.p), np.eye(config.dim))


def quantum_determinant(u: complex, config: ModelConfig) -> np.ndarray:
    """A(u) D(u-eta) - B(u) C(u-eta), proportional to the identity."""
    tu = monodromy(u, config)
    ts = monodromy(u - config.eta, config)
    return tu.a @ ts.d - tu.b @ ts.c
