"""Scalar functional data of the model and the eigenvalue-level fusion hierarchy.

The quantum determinant factorizes through two scalar dressing functions

    a(u) = e^{N eta/2} s * prod_n (e^u - ghat_n e^{-u}),   ghat_n = g-_n h+_n / (d+_n f+_n),
    d(u) = e^{-N eta/2} s * prod_n (e^u - gbar_n e^{-u}),  gbar_n = g+_n h-_n / (d+_n f+_n),

with s = (D+ F+)^{1/2}; delta(u) = a(u) d(u - eta) is the quantum
determinant's scalar.  The square root fixes a branch: flipping the sign of
s flips a and d together, which the spectral problem absorbs by shifting
phi_k by i*pi (p is odd), so physical results are branch-independent.  The
``sqrt_sign`` flag selects the branch explicitly.

Averages over the p-fold eta-shift orbit,

    Abar(u) = prod_m a(u - m eta),   Dbar(u) = prod_m d(u - m eta),

and the averaged monodromy entries calA(u), calD(u) (built from the 2x2
product of entrywise-averaged site operators) are Laurent polynomials of
e^{pu}.  F(u) = calA + calD - e^{p phi} Abar - e^{-p phi} Dbar is the
inhomogeneous-term generator; it has exactly N+1 coefficients on exponents
p(N-2l), and its pN zeros (unique mod i*pi) drive the closure argument for
the spectral identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .laurent import LaurentPoly, fit_laurent
from .model import ModelConfig, require_valid
from .transfer import ModelConstants, constants


class BranchError(ValueError):
    """The principal square root is ambiguous for this configuration."""


class NonGenericPhiError(ValueError):
    """phi makes the leading/trailing F coefficient vanish."""


class DegenerateZerosError(RuntimeError):
    """Two zeros of F coincide within tolerance."""


class FusionConsistencyError(RuntimeError):
    """Recursion and determinant routes for a fused eigenvalue disagree."""


class ScalarFunctions:
    """Evaluators for a, d, delta, the shift-orbit averages, and calA/calD."""

    def __init__(self, config: ModelConfig, sqrt_sign: int = +1):
        require_valid(config)
        if sqrt_sign not in (+1, -1):
            raise ValueError("sqrt_sign must be +1 or -1")
        self.config = config
        self.eta = config.eta
        self.n = config.n_sites
        self.p = config.p
        self.consts: ModelConstants = constants(config)

        df = self.consts.d_plus * self.consts.f_plus
        if df.real < 0 and abs(df.imag) < 1e-14 * abs(df.real):
            raise BranchError(
                "D+ F+ lies on the negative real axis; the principal square "
                "root is ambiguous -- rotate the couplings or pick sqrt_sign"
            )
        self.sqrt_df = sqrt_sign * complex(np.sqrt(df))

        sites = config.sites
        self.ghat = np.array(
            [s.g_minus * s.h_plus / (s.d_plus * s.f_plus) for s in sites]
        )
        self.gbar = np.array(
            [s.g_plus * s.h_minus / (s.d_plus * s.f_plus) for s in sites]
        )
        self._pref_a = np.exp(self.n * self.eta / 2) * self.sqrt_df
        self._pref_d = np.exp(-self.n * self.eta / 2) * self.sqrt_df

    # -- dressing functions -------------------------------------------------

    def a(self, u: complex) -> complex:
        eu, emu = np.exp(u), np.exp(-u)
        return complex(self._pref_a * np.prod(eu - self.ghat * emu))

    def d(self, u: complex) -> complex:
        eu, emu = np.exp(u), np.exp(-u)
        return complex(self._pref_d * np.prod(eu - self.gbar * emu))

    def a_prime(self, u: complex) -> complex:
        return self._prod_prime(u, self.ghat, self._pref_a)

    def d_prime(self, u: complex) -> complex:
        return self._prod_prime(u, self.gbar, self._pref_d)

    def _prod_prime(self, u, g, pref) -> complex:
        eu, emu = np.exp(u), np.exp(-u)
        factors = eu - g * emu
        dfactors = eu + g * emu
        total = 0.0 + 0.0j
        for i in range(len(g)):
            rest = np.prod(np.delete(factors, i))
            total += dfactors[i] * rest
        return complex(pref * total)

    def delta(self, u: complex) -> complex:
        """Quantum-determinant scalar a(u) d(u - eta)."""
        return self.a(u) * self.d(u - self.eta)

    # -- eta-shift-orbit averages -------------------------------------------

    def abar(self, u: complex) -> complex:
        return complex(np.prod([self.a(u - m * self.eta) for m in range(1, self.p + 1)]))

    def dbar(self, u: complex) -> complex:
        return complex(np.prod([self.d(u - m * self.eta) for m in range(1, self.p + 1)]))

    # -- averaged monodromy entries ------------------------------------------

    def averaged_site(self, site: int, u: complex) -> np.ndarray:
        """Entrywise average of one site operator: a 2x2 scalar matrix."""
        s = self.config.sites[site - 1]
        p = self.p
        ep, emp = np.exp(p * u), np.exp(-p * u)
        return np.array(
            [
                [ep * s.d_plus**p + emp * s.d_minus**p, s.g_plus**p + s.g_minus**p],
                [s.h_plus**p + s.h_minus**p, ep * s.f_plus**p + emp * s.f_minus**p],
            ],
            dtype=np.complex128,
        )

    def averaged_monodromy(self, u: complex) -> np.ndarray:
        t = self.averaged_site(self.n, u)
        for site in range(self.n - 1, 0, -1):
            t = t @ self.averaged_site(site, u)
        return t

    def cal_a(self, u: complex) -> complex:
        return complex(self.averaged_monodromy(u)[0, 0])

    def cal_d(self, u: complex) -> complex:
        return complex(self.averaged_monodromy(u)[1, 1])


@lru_cache(maxsize=16)
def scalar_functions(config: ModelConfig, sqrt_sign: int = +1) -> ScalarFunctions:
    return ScalarFunctions(config, sqrt_sign)


class FkFunction:
    """The inhomogeneous-term generator for one shift parameter phi.

    F(u) = calA(u) + calD(u) - e^{p phi} Abar(u) - e^{-p phi} Dbar(u).

    Carries the N+1 Laurent coefficients on exponents p(N-2l) and the pN
    zeros, canonicalized into the strip Im z in (-pi/2, pi/2].
    """

    def __init__(self, sf: ScalarFunctions, phi: complex,
                 coeff_floor: float = 1e-10, zero_sep: float = 1e-8):
        self.sf = sf
        self.phi = complex(phi)
        p, n = sf.p, sf.n
        self._epp = np.exp(p * self.phi)

        poly = fit_laurent(self._direct, max_deg=p * n, spacing=2 * p, nodes="unit")
        self.poly = poly
        scale = poly.scale()
        if abs(poly.leading) < coeff_floor * scale or abs(poly.trailing) < coeff_floor * scale:
            raise NonGenericPhiError(
                f"phi={phi} is not generic: extreme Laurent coefficient below "
                f"{coeff_floor:.1e} of the coefficient scale"
            )
        self.zeros = self._find_zeros(zero_sep)

    def _direct(self, u: complex) -> complex:
        sf = self.sf
        return (
            sf.cal_a(u) + sf.cal_d(u)
            - self._epp * sf.abar(u)
            - sf.dbar(u) / self._epp
        )

    def __call__(self, u):
        return self.poly(u)

    def derivative(self, u):
        return self.poly.derivative()(u)

    @property
    def coefficients(self) -> np.ndarray:
        """Coefficients ordered from exponent -pN up to +pN (step 2p)."""
        return self.poly.coeffs

    def _find_zeros(self, zero_sep: float) -> np.ndarray:
        """All pN zeros in Im z in (-pi/2, pi/2].

        In y = e^{2pu} the function is y^{-N/2}-proportional to a degree-N
        polynomial; its N roots are found as companion-matrix eigenvalues,
        each lifting to p strip representatives spaced i*pi/p, then one
        Newton polish per zero.
        """
        p, n = self.sf.p, self.sf.n
        # poly coeffs are ordered by ascending exponent; highest power first for roots()
        y_coeffs = self.poly.coeffs[::-1]
        y_roots = np.roots(y_coeffs)
        if len(y_roots) != n or np.any(y_roots == 0):
            raise NonGenericPhiError("F degenerates: wrong root count in e^{2pu}")
        for i in range(n):
            for j in range(i + 1, n):
                if abs(y_roots[i] - y_roots[j]) <= zero_sep * max(abs(y_roots[i]), 1.0):
                    raise DegenerateZerosError(
                        f"repeated zeros of F (y-roots {y_roots[i]:.6g} ~ {y_roots[j]:.6g})"
                    )
        fprime = self.poly.derivative()
        zeros = []
        for y in y_roots:
            base = np.log(y) / (2 * p)
            for m in range(p):
                z = base + 1j * np.pi * m / p
                z -= 1j * np.pi * np.ceil((z.imag - np.pi / 2) / np.pi)
                for _ in range(2):  # Newton polish
                    fz, dz = self.poly(z), fprime(z)
                    if dz != 0:
                        step = fz / dz
                        if abs(step) < 0.1:
                            z = z - step
                zeros.append(z)
        zeros = np.array(zeros)
        return zeros[np.lexsort((zeros.imag, zeros.real))]


def fk(config: ModelConfig, phi: complex, sqrt_sign: int = +1) -> FkFunction:
    return FkFunction(scalar_functions(config, sqrt_sign), phi)


# ---------------------------------------------------------------------------
# Fusion hierarchy at the eigenvalue level.

def fused_eigenvalue(lambda_fn, j, sf: ScalarFunctions, u: complex,
                     cross_check: bool = True, check_tol: float = 1e-8) -> complex:
    """The spin-j fused eigenvalue built from the fundamental curve.

    Evaluates the quadratic recursion

        L^(j)(u) = L(u + (j-1/2) eta) L^(j-1/2)(u - eta/2)
                   - delta(u + (j-1/2) eta) L^(j-1)(u - eta),

    with L^(-1/2) = 0 and L^(0) = 1, and cross-validates the result against
    the 2j x 2j tridiagonal determinant route (evaluated by its three-term
    recursion).  Disagreement raises FusionConsistencyError.
    """
    jj = round(2 * j)
    if jj < 0 or abs(2 * j - jj) > 1e-12:
        raise ValueError(f"j must be a non-negative half-integer, got {j}")
    val = _fused_recursion(lambda_fn, jj, sf, u)
    if cross_check and jj >= 2:
        det = _fused_determinant(lambda_fn, jj, sf, u)
        scale = max(abs(val), abs(det), 1e-300)
        if abs(val - det) / scale > check_tol:
            raise FusionConsistencyError(
                f"fusion recursion and determinant disagree at j={j}, u={u}: "
                f"{val} vs {det}"
            )
    return val


def _fused_recursion(lambda_fn, jj: int, sf: ScalarFunctions, u: complex) -> complex:
    # jj = 2j; values indexed by twice the spin
    if jj == 0:
        return 1.0 + 0.0j
    if jj == 1:
        return complex(lambda_fn(u))
    eta = sf.eta
    shift = (jj - 1) / 2 * eta
    return complex(
        lambda_fn(u + shift) * _fused_recursion(lambda_fn, jj - 1, sf, u - eta / 2)
        - sf.delta(u + shift) * _fused_recursion(lambda_fn, jj - 2, sf, u - eta)
    )


def _fused_determinant(lambda_fn, jj: int, sf: ScalarFunctions, u: complex) -> complex:
    # tridiagonal determinant with diagonal L(v_i), v_i = u + (j - 1/2 - (i-1)) eta,
    # and super/sub product a(v_i) d(v_i - eta) = delta(v_i)
    eta = sf.eta
    d_prev, d_cur = 1.0 + 0.0j, 1.0 + 0.0j
    v = None
    for i in range(1, jj + 1):
        v_prev = v
        v = u + ((jj - 1) / 2 - (i - 1)) * eta
        if i == 1:
            d_prev, d_cur = d_cur, complex(lambda_fn(v))
        else:
            d_prev, d_cur = d_cur, complex(
                lambda_fn(v) * d_cur - sf.delta(v_prev) * d_prev
            )
    return d_cur


def check_truncation(lambda_fn, config: ModelConfig, u_grid,
                     sqrt_sign: int = +1) -> float:
    """Max relative residual of the root-of-unity truncation identity.

    At every grid point: L^(p/2)(u) - calA(u) - calD(u)
                         - delta(u - (p-1)/2 eta) L^((p-2)/2)(u),
    normalized by max(|L^(p/2)|, |calA| + |calD|).
    """
    sf = scalar_functions(config, sqrt_sign)
    worst = 0.0
    for u in np.atleast_1d(np.asarray(u_grid, dtype=np.complex128)):
        g, scale = _g_value(lambda_fn, sf, complex(u))
        worst = max(worst, abs(g) / scale)
    return worst


def g_function(lambda_fn, config: ModelConfig, u: complex,
               sqrt_sign: int = +1) -> complex:
    """The truncation defect g(u); identically zero on true eigenvalue curves."""
    sf = scalar_functions(config, sqrt_sign)
    g, _ = _g_value(lambda_fn, sf, u)
    return g


def g_scale(lambda_fn, config: ModelConfig, u: complex, sqrt_sign: int = +1) -> float:
    sf = scalar_functions(config, sqrt_sign)
    _, scale = _g_value(lambda_fn, sf, u)
    return scale


def _g_value(lambda_fn, sf: ScalarFunctions, u: complex):
    p = sf.p
    top = fused_eigenvalue(lambda_fn, p / 2, sf, u)
    below = fused_eigenvalue(lambda_fn, (p - 2) / 2, sf, u)
    avg = sf.cal_a(u) + sf.cal_d(u)
    corr = sf.delta(u - (p - 1) / 2 * sf.eta) * below
    g = top - avg - corr
    scale = max(abs(top), abs(sf.cal_a(u)) + abs(sf.cal_d(u)), 1e-300)
    return g, scale


def g_laurent(lambda_fn, config: ModelConfig, sqrt_sign: int = +1,
              x0: float = 0.19) -> LaurentPoly:
    """Laurent coefficients of g(u) on exponents -pN..pN (step 2).

    Used to certify that the extreme coefficients vanish for solved states.
    Retries with shifted sample nodes if an evaluation lands on a pole of
    the supplied curve.
    """
    sf = scalar_functions(config, sqrt_sign)
    deg = config.p * config.n_sites
    last_err = None
    for shift in (0.0, 0.071, -0.113):
        try:
            return fit_laurent(
                lambda u: _g_value(lambda_fn, sf, u)[0],
                max_deg=deg, spacing=2, nodes="unit", x0=x0 + shift,
                check_tol=None,
            )
        except (ZeroDivisionError, FloatingPointError, ValueError) as err:
            last_err = err
    raise RuntimeError(f"could not sample g(u) away from poles: {last_err}")
