"""Inhomogeneous T-Q spectral closure: evaluation, residuals, and the solver.

For a sector k and a free shift parameter phi, an eigenvalue curve is
written as

    Lambda(u) = e^{phi} a(u) Q(u-eta)/Q(u) + e^{-phi} d(u) Q(u+eta)/Q(u)
                + 2^{(1-p)N} c F(u)/Q(u),

with Q(u) = prod_j sinh(u - lambda_j) over (p-1)N roots.  Pole-freeness at
each root gives the (p-1)N bulk equations; matching the e^{+Nu} asymptote
q^k D+ + q^{-k} F+ gives one more, closing a square system in
(lambda_1..lambda_n, c).  Matching the e^{-Nu} asymptote is implied up to a
discrete choice and is used only as a selection rule on converged solutions.

Root canonicalization: each root is shifted into Im in (-pi/2, pi/2]; every
i*pi shift flips the sign of Q globally, which is absorbed into the sign of
c, leaving the curve and all residuals unchanged.

The closed-form asymptotic brackets carry a factor e^{-pN eta/2}; for
p_prime = 1 this is the familiar (-1)^N.  Keeping it in exponential form
makes the generalized crossing parameter eta = 2 pi i p'/p work unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linear_sum_assignment

from .functional import FkFunction, ScalarFunctions, check_truncation, scalar_functions
from .laurent import fit_laurent
from .model import ModelConfig, require_valid
from .transfer import constants


class PoleProximityError(ZeroDivisionError):
    """Evaluation point is numerically on top of a Q zero."""


class IllPosedStateError(ValueError):
    """Roots coincide (mod i*pi): Q has a double zero."""


@dataclass(frozen=True)
class BetheState:
    k: int
    phi: complex
    roots: tuple[complex, ...]
    c: complex

    @property
    def n_roots(self) -> int:
        return len(self.roots)


def canonicalize(state: BetheState) -> BetheState:
    """Shift roots into Im in (-pi/2, pi/2], absorb sign flips into c, sort."""
    roots = []
    flips = 0
    for lam in state.roots:
        m = int(np.ceil((lam.imag - np.pi / 2) / np.pi))
        roots.append(lam - 1j * np.pi * m)
        flips += m
    c = state.c * (-1) ** (flips % 2)
    roots.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return BetheState(state.k, state.phi, tuple(roots), c)


def _strip_dist(a: complex, b: complex) -> float:
    return min(abs(a - b), abs(a - b - 1j * np.pi), abs(a - b + 1j * np.pi))


def root_set_distance(a, b) -> float:
    """Optimal-assignment distance between two root multisets (mod i*pi)."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return np.inf
    cost = np.array([[_strip_dist(x, y) for y in b] for x in a])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def q_polynomial(u: complex, roots) -> complex:
    return complex(np.prod(np.sinh(u - np.asarray(roots))))


# ---------------------------------------------------------------------------
# Per-(config, k, phi) context with the closed-form asymptotic targets.

class _TQContext:
    def __init__(self, config: ModelConfig, k: int, phi: complex, sqrt_sign: int):
        require_valid(config)
        self.config = config
        self.k = int(k) % config.p
        self.phi = complex(phi)
        self.sf: ScalarFunctions = scalar_functions(config, sqrt_sign)
        self.fk = FkFunction(self.sf, self.phi)
        self.eta = config.eta
        p, n_sites = config.p, config.n_sites
        self.n = (p - 1) * n_sites
        self.pref = 2.0 ** ((1 - p) * n_sites)

        cs = constants(config)
        q = config.q
        s = self.sf.sqrt_df
        qk = q**self.k
        phase = np.exp(-p * n_sites * self.eta / 2)  # (-1)^N for p_prime = 1

        # e^{+Nu} matching: term list, constant part, and c-bracket
        self.lead_terms = (
            qk * cs.d_plus,
            cs.f_plus / qk,
            -2 * s * np.cosh(self.phi + 1.5 * n_sites * self.eta),
        )
        self.w_plus = (
            cs.d_plus**p + cs.f_plus**p
            - 2 * phase * s**p * np.cosh(p * self.phi)
        )

        # e^{-Nu} matching (selection rule)
        gh_mp = cs.g_minus * cs.h_plus
        gh_pm = cs.g_plus * cs.h_minus
        sign_n = (-1.0) ** n_sites
        self.trail_terms = (
            cs.d_minus / qk,
            qk * cs.f_minus,
            -sign_n * np.exp(self.phi - n_sites * self.eta / 2) * gh_mp / s,
            -sign_n * np.exp(-self.phi + n_sites * self.eta / 2) * gh_pm / s,
        )
        self.w_minus = (
            cs.d_minus**p + cs.f_minus**p
            - phase * sign_n
            * (np.exp(p * self.phi) * gh_mp**p + np.exp(-p * self.phi) * gh_pm**p)
            / s**p
        )

    # -- residuals ----------------------------------------------------------

    def bulk_terms(self, roots: np.ndarray, c: complex):
        """The three T-Q terms of the pole-freeness equation at every root."""
        sf, eta, phi = self.sf, self.eta, self.phi
        t1 = np.array(
            [np.exp(phi) * sf.a(l) * q_polynomial(l - eta, roots) for l in roots]
        )
        t2 = np.array(
            [np.exp(-phi) * sf.d(l) * q_polynomial(l + eta, roots) for l in roots]
        )
        t3 = np.array([self.pref * c * self.fk(l) for l in roots])
        return t1, t2, t3

    def residuals_raw(self, roots: np.ndarray, c: complex):
        """Square-system residual vector (bulk + leading match), raw scale."""
        t1, t2, t3 = self.bulk_terms(roots, c)
        bulk = t1 + t2 + t3
        bulk_norm = np.maximum.reduce([np.abs(t1), np.abs(t2), np.abs(t3)])
        lead_c = -c * np.exp(np.sum(roots)) * self.w_plus
        lead = sum(self.lead_terms) + lead_c
        lead_norm = max(*(abs(t) for t in self.lead_terms), abs(lead_c))
        res = np.concatenate([bulk, [lead]])
        norms = np.concatenate([bulk_norm, [lead_norm]])
        return res, np.maximum(norms, 1e-300)

    def trail_residual(self, roots: np.ndarray, c: complex):
        trail_c = -c * np.exp(-np.sum(roots)) * self.w_minus
        raw = sum(self.trail_terms) + trail_c
        norm = max(*(abs(t) for t in self.trail_terms), abs(trail_c), 1e-300)
        return raw, norm

    def jacobian(self, roots: np.ndarray, c: complex) -> np.ndarray:
        """Holomorphic Jacobian of residuals_raw in (roots, c)."""
        sf, eta, phi = self.sf, self.eta, self.phi
        n = self.n
        jac = np.zeros((n + 1, n + 1), dtype=np.complex128)
        ephi, emphi = np.exp(phi), np.exp(-phi)
        fprime = self.fk.poly.derivative()

        for j in range(n):
            lj = roots[j]
            sm = np.sinh(lj - eta - roots)
            cm = np.cosh(lj - eta - roots)
            sp = np.sinh(lj + eta - roots)
            cp = np.cosh(lj + eta - roots)
            qm, qp = np.prod(sm), np.prod(sp)
            aj, dj = sf.a(lj), sf.d(lj)

            def loo(vals, i):
                return np.prod(np.delete(vals, i))

            for i in range(n):
                if i == j:
                    continue
                jac[j, i] = (
                    -ephi * aj * cm[i] * loo(sm, i)
                    - emphi * dj * cp[i] * loo(sp, i)
                )
            diag = ephi * sf.a_prime(lj) * qm + emphi * sf.d_prime(lj) * qp
            for m in range(n):
                if m == j:
                    continue
                diag += ephi * aj * cm[m] * loo(sm, m)
                diag += emphi * dj * cp[m] * loo(sp, m)
            diag += self.pref * c * fprime(lj)
            jac[j, j] = diag
            jac[j, n] = self.pref * self.fk(lj)

        e_sum = np.exp(np.sum(roots))
        jac[n, :n] = -c * e_sum * self.w_plus
        jac[n, n] = -e_sum * self.w_plus
        return jac

    # -- curve evaluation -----------------------------------------------------

    def lambda_value(self, u: complex, roots, c: complex) -> complex:
        roots = np.asarray(roots)
        qu = q_polynomial(u, roots)
        qref = float(np.prod(np.maximum(np.abs(np.sinh(u - roots)), 1.0)))
        if abs(qu) < 1e-12 * qref or qu == 0:
            raise PoleProximityError(
                f"|Q({u})| = {abs(qu):.3e} is too close to a Bethe root"
            )
        sf, eta, phi = self.sf, self.eta, self.phi
        return complex(
            (
                np.exp(phi) * sf.a(u) * q_polynomial(u - eta, roots)
                + np.exp(-phi) * sf.d(u) * q_polynomial(u + eta, roots)
                + self.pref * c * self.fk(u)
            )
            / qu
        )


@lru_cache(maxsize=64)
def _context(config: ModelConfig, k: int, phi: complex, sqrt_sign: int) -> _TQContext:
    return _TQContext(config, k, phi, sqrt_sign)


def _check_separation(roots, tol: float = 1e-8):
    roots = list(roots)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if _strip_dist(roots[i], roots[j]) < tol:
                raise IllPosedStateError(
                    f"roots {i} and {j} coincide mod i*pi: "
                    f"{roots[i]:.8g} ~ {roots[j]:.8g}"
                )


def lambda_tq(state: BetheState, config: ModelConfig, u,
              sqrt_sign: int = +1):
    """Evaluate the T-Q curve of a state at u (scalar or array)."""
    ctx = _context(config, state.k, state.phi, sqrt_sign)
    u_arr = np.atleast_1d(np.asarray(u, dtype=np.complex128))
    vals = np.array([ctx.lambda_value(complex(x), state.roots, state.c) for x in u_arr])
    return complex(vals[0]) if np.isscalar(u) or np.asarray(u).ndim == 0 else vals


def bae_residuals(state: BetheState, config: ModelConfig,
                  sqrt_sign: int = +1) -> np.ndarray:
    """Normalized residuals: n bulk equations, leading match, trailing match."""
    _check_separation(state.roots)
    ctx = _context(config, state.k, state.phi, sqrt_sign)
    roots = np.asarray(state.roots)
    res, norms = ctx.residuals_raw(roots, state.c)
    trail, trail_norm = ctx.trail_residual(roots, state.c)
    return np.concatenate([res / norms, [trail / trail_norm]])


def newton_refine(ctx: _TQContext, roots: np.ndarray, c: complex,
                  max_iter: int = 100, tol: float = 1e-12):
    """Damped Newton on the square system; returns (roots, c, normres, ok).

    Steps are accepted only if the raw residual 2-norm decreases
    (backtracking line search); convergence is judged on the normalized
    max-residual.  ok means the state reached the 1e-10 convergence bar.
    """
    z = np.concatenate([roots.astype(np.complex128), [complex(c)]])
    res, norms = ctx.residuals_raw(z[:-1], z[-1])
    normres = float(np.abs(res / norms).max())
    stall = 0
    for _ in range(max_iter):
        if normres <= tol:
            break
        try:
            step = np.linalg.solve(ctx.jacobian(z[:-1], z[-1]), res)
        except np.linalg.LinAlgError:
            break
        cur = float(np.linalg.norm(res))
        t, accepted, rn = 1.0, False, cur
        for _ in range(30):
            z_new = z - t * step
            res_new, norms_new = ctx.residuals_raw(z_new[:-1], z_new[-1])
            rn = float(np.linalg.norm(res_new))
            if np.isfinite(rn) and rn < cur:
                accepted = True
                break
            t /= 2
        if not accepted:
            break
        stall = stall + 1 if rn > 0.999 * cur else 0
        z, res, norms = z_new, res_new, norms_new
        normres = float(np.abs(res / norms).max())
        if stall >= 3:
            break
    return z[:-1], z[-1], normres, normres <= 1e-10


def refine_state(state: BetheState, config: ModelConfig,
                 sqrt_sign: int = +1, max_iter: int = 100,
                 extended: bool = False) -> tuple[BetheState, float, bool]:
    """Newton-polish a seed state; returns (state, normres, converged).

    With extended=True a converged state is polished further in 80-bit
    arithmetic, pushing root accuracy below the double-precision residual
    noise floor (relevant when curves are compared at points where
    |Lambda| is large).
    """
    ctx = _context(config, state.k, state.phi, sqrt_sign)
    roots, c, normres, ok = newton_refine(
        ctx, np.asarray(state.roots), state.c, max_iter=max_iter
    )
    if ok and extended:
        roots, c = _polish_extended(ctx, roots, c)
    refined = canonicalize(BetheState(state.k, state.phi, tuple(roots), complex(c)))
    return refined, normres, ok


# ---------------------------------------------------------------------------
# Extended-precision polish.  Double-precision Newton stalls when the
# residual evaluation noise (dominated by the averaged pieces inside F) is
# reached; a few fixed-point iterations with clongdouble residuals and the
# double Jacobian push the roots to the 80-bit noise floor instead.  The
# Jacobian precision only affects the convergence rate, not the fixed point.

class _ExtendedEval:
    def __init__(self, ctx: _TQContext):
        X = np.clongdouble
        cfg = ctx.config
        self.p, self.nsites = cfg.p, cfg.n_sites
        self.eta = X(2j) * X(np.pi) * cfg.p_prime / cfg.p
        self.phi = X(ctx.phi)
        self.pref = X(ctx.pref)
        sites = cfg.sites
        self.ghat = np.array(
            [X(s.g_minus) * X(s.h_plus) / (X(s.d_plus) * X(s.f_plus)) for s in sites]
        )
        self.gbar = np.array(
            [X(s.g_plus) * X(s.h_minus) / (X(s.d_plus) * X(s.f_plus)) for s in sites]
        )
        df = np.prod([X(s.d_plus) * X(s.f_plus) for s in sites])
        s_ext = np.sqrt(df)
        if (s_ext * np.conj(X(ctx.sf.sqrt_df))).real < 0:
            s_ext = -s_ext  # keep the branch chosen by the double context
        self.sqrt_df = s_ext
        self.pref_a = np.exp(self.nsites * self.eta / 2) * s_ext
        self.pref_d = np.exp(-self.nsites * self.eta / 2) * s_ext
        self.site_plus = [
            np.array([[X(s.d_plus) ** self.p, X(0)], [X(0), X(s.f_plus) ** self.p]])
            for s in sites
        ]
        self.site_minus = [
            np.array([[X(s.d_minus) ** self.p, X(0)], [X(0), X(s.f_minus) ** self.p]])
            for s in sites
        ]
        self.site_off = [
            np.array(
                [
                    [X(0), X(s.g_plus) ** self.p + X(s.g_minus) ** self.p],
                    [X(s.h_plus) ** self.p + X(s.h_minus) ** self.p, X(0)],
                ]
            )
            for s in sites
        ]
        self.lead_const = np.clongdouble(sum(ctx.lead_terms))
        consts = constants(cfg)
        phase = np.exp(-self.p * self.nsites * self.eta / 2)
        self.w_plus = (
            X(consts.d_plus) ** self.p + X(consts.f_plus) ** self.p
            - 2 * phase * s_ext**self.p * np.cosh(self.p * self.phi)
        )

    def a(self, u):
        eu, emu = np.exp(u), np.exp(-u)
        return self.pref_a * np.prod(eu - self.ghat * emu)

    def d(self, u):
        eu, emu = np.exp(u), np.exp(-u)
        return self.pref_d * np.prod(eu - self.gbar * emu)

    def averaged(self, u) -> np.ndarray:
        ep, emp = np.exp(self.p * u), np.exp(-self.p * u)
        t = None
        for site in range(self.nsites, 0, -1):
            m = ep * self.site_plus[site - 1] + emp * self.site_minus[site - 1] \
                + self.site_off[site - 1]
            t = m if t is None else t @ m
        return t

    def f_value(self, u):
        epp = np.exp(self.p * self.phi)
        abar = np.prod([self.a(u - m * self.eta) for m in range(1, self.p + 1)])
        dbar = np.prod([self.d(u - m * self.eta) for m in range(1, self.p + 1)])
        avg = self.averaged(u)
        return avg[0, 0] + avg[1, 1] - epp * abar - dbar / epp

    def residuals(self, roots, c):
        ephi, emphi = np.exp(self.phi), np.exp(-self.phi)
        out = []
        for lj in roots:
            qm = np.prod(np.sinh(lj - self.eta - roots))
            qp = np.prod(np.sinh(lj + self.eta - roots))
            out.append(
                ephi * self.a(lj) * qm + emphi * self.d(lj) * qp
                + self.pref * c * self.f_value(lj)
            )
        out.append(self.lead_const - c * np.exp(np.sum(roots)) * self.w_plus)
        return np.array(out)


def _gauss_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gaussian elimination with partial pivoting for clongdouble systems."""
    a = a.copy()
    b = b.copy()
    n = len(b)
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            raise np.linalg.LinAlgError("singular extended system")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, n):
            f = a[row, col] / a[col, col]
            a[row, col:] -= f * a[col, col:]
            b[row] -= f * b[col]
    x = np.zeros_like(b)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def _polish_extended(ctx: _TQContext, roots: np.ndarray, c: complex,
                     iters: int = 4):
    ext = _ExtendedEval(ctx)
    z = np.concatenate([roots, [c]]).astype(np.clongdouble)
    for _ in range(iters):
        res = ext.residuals(z[:-1], z[-1])
        jac = ctx.jacobian(
            z[:-1].astype(np.complex128), complex(z[-1])
        ).astype(np.clongdouble)
        z = z - _gauss_solve(jac, res)
    return z[:-1].astype(np.complex128), complex(z[-1])


def solve_bae(config: ModelConfig, k: int, phi: complex, seeds=None,
              n_starts: int = 200, rng_seed: int = 0, box_re: float = 2.5,
              sqrt_sign: int = +1, select_tol: float = 1e-8,
              dedup_tol: float = 1e-6, converge_tol: float = 1e-10,
              full_output: bool = False):
    """Multi-start solve of the square system, then select by trailing match.

    Seeds (BetheState or bare root tuples) are tried first, followed by
    n_starts uniformly random starts in |Re| <= box_re, |Im| <= pi/2 with c
    initialized from the leading-match equation (linear in c).  Converged
    states are canonicalized, deduplicated by optimal-assignment root
    distance, and filtered by the trailing-asymptote selection rule.

    Returns the selected states; with full_output also the rejected ones.
    """
    ctx = _context(config, int(k), complex(phi), sqrt_sign)
    n = ctx.n
    rng = np.random.default_rng(rng_seed)

    starts: list[tuple[np.ndarray, complex]] = []
    for seed in seeds or ():
        if isinstance(seed, BetheState):
            starts.append((np.asarray(seed.roots, dtype=np.complex128), complex(seed.c)))
        else:
            roots = np.asarray(seed, dtype=np.complex128)
            starts.append((roots, _init_c(ctx, roots)))
    for _ in range(n_starts):
        roots = (
            rng.uniform(-box_re, box_re, n)
            + 1j * rng.uniform(-np.pi / 2, np.pi / 2, n)
        )
        starts.append((roots, _init_c(ctx, roots)))

    found: list[tuple[BetheState, float]] = []
    for roots0, c0 in starts:
        roots, c, normres, ok = newton_refine(ctx, roots0, c0)
        if not ok or normres > converge_tol:
            continue
        try:
            _check_separation(roots, tol=1e-6)
        except IllPosedStateError:
            continue
        state = canonicalize(BetheState(ctx.k, ctx.phi, tuple(roots), complex(c)))
        if any(root_set_distance(state.roots, s.roots) <= dedup_tol for s, _ in found):
            continue
        trail, trail_norm = ctx.trail_residual(np.asarray(state.roots), state.c)
        found.append((state, abs(trail / trail_norm)))

    selected = [s for s, trail in found if trail <= select_tol]
    rejected = [s for s, trail in found if trail > select_tol]
    if full_output:
        return selected, rejected
    return selected


def _init_c(ctx: _TQContext, roots: np.ndarray) -> complex:
    denom = np.exp(np.sum(roots)) * ctx.w_plus
    if denom == 0:
        return 0.0 + 0.0j
    return complex(sum(ctx.lead_terms) / denom)


# ---------------------------------------------------------------------------
# Verification against the exact-diagonalization curves.

@dataclass(frozen=True)
class StateReport:
    max_deviation: float
    matched_curve: int
    matched_sector: int
    sector_match: bool
    truncation_residual: float
    spurious: bool


def verify_state(state: BetheState, config: ModelConfig, curves,
                 u_grid=None, match_tol: float = 1e-6,
                 sqrt_sign: int = +1) -> StateReport:
    """Match a state's T-Q curve against the nearest exact eigenvalue curve."""
    if u_grid is None:
        u_grid = np.linspace(-1.0, 1.0, 40)
    vals = lambda_tq(state, config, u_grid, sqrt_sign)
    best, best_idx = np.inf, -1
    for i, curve in enumerate(curves):
        dev = float(np.abs(vals - curve(u_grid)).max())
        if dev < best:
            best, best_idx = dev, i
    curve = curves[best_idx]
    trunc = check_truncation(
        lambda u: lambda_tq(state, config, u, sqrt_sign), config, u_grid, sqrt_sign
    )
    return StateReport(
        max_deviation=best,
        matched_curve=curve.index,
        matched_sector=curve.sector,
        sector_match=curve.sector == state.k,
        truncation_residual=trunc,
        spurious=best > match_tol,
    )


# ---------------------------------------------------------------------------
# Degenerate reduction: the inhomogeneous term switched off by constraints.

@dataclass(frozen=True)
class DegenerateSpec:
    """Parameter-submanifold data for the two-term reduction.

    branch "ff": e^{2M eta} G- H+ = (-1)^N F+ F-;
    branch "dd": e^{2M eta} G- H+ = (-1)^N D+ D-.
    """

    m_roots: int
    branch: str  # "ff" or "dd"
    roots: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.branch not in ("ff", "dd"):
            raise ValueError("branch must be 'ff' or 'dd'")
        if len(self.roots) != self.m_roots:
            raise ValueError(f"expected {self.m_roots} roots, got {len(self.roots)}")


@dataclass(frozen=True)
class DegenerateReduction:
    phi: complex
    constraint_residual: float
    f_grid_max: float          # max |F| / scale on the check grid
    middle_coeff_max: float    # max middle |F coefficient| / scale (N >= 2)
    extreme_coeff_max: float   # max extreme |F coefficient| / scale
    spec: DegenerateSpec
    k: int


def degenerate_reduce(config: ModelConfig, k: int, spec: DegenerateSpec,
                      sqrt_sign: int = +1, tol: float = 1e-10):
    """Two-term reduction under the extra constraints.

    Returns (phi, lambda_fn, residual_fn, report).  lambda_fn evaluates the
    conventional two-term curve with the degree-M auxiliary polynomial;
    residual_fn returns the M normalized pole-freeness residuals (empty for
    M = 0).  Raises if the constraint or the F = 0 requirement fails.
    """
    require_valid(config)
    sf = scalar_functions(config, sqrt_sign)
    cs = constants(config)
    p, n_sites, eta = config.p, config.n_sites, config.eta
    m = spec.m_roots
    k = int(k) % p

    lhs = np.exp(2 * m * eta) * cs.g_minus * cs.h_plus
    rhs = (-1.0) ** n_sites * (
        cs.f_plus * cs.f_minus if spec.branch == "ff" else cs.d_plus * cs.d_minus
    )
    c_res = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    if c_res > tol:
        raise ValueError(
            f"degenerate constraint ({spec.branch}) residual {c_res:.3e} > {tol:.1e}"
        )

    s = sf.sqrt_df
    ratio = cs.d_plus / s if spec.branch == "ff" else cs.f_plus / s
    e_phi = np.exp(-(n_sites / 2 - m + k) * eta) * ratio
    phi = complex(np.log(e_phi))

    # F must vanish identically with this phi
    f_poly = fit_laurent(
        lambda u: sf.cal_a(u) + sf.cal_d(u)
        - e_phi**p * sf.abar(u) - sf.dbar(u) / e_phi**p,
        max_deg=p * n_sites, spacing=2 * p, nodes="unit", check_tol=None,
    )
    grid = np.linspace(-1.5, 1.5, 50)
    piece_scale = max(
        abs(sf.cal_a(u)) + abs(sf.cal_d(u))
        + abs(e_phi**p * sf.abar(u)) + abs(sf.dbar(u) / e_phi**p)
        for u in grid
    )
    f_grid_max = max(abs(f_poly(u)) for u in grid) / piece_scale
    coeffs = np.abs(f_poly.coeffs) / piece_scale
    extreme_max = float(max(coeffs[0], coeffs[-1]))
    middle_max = float(coeffs[1:-1].max()) if len(coeffs) > 2 else 0.0
    if f_grid_max > tol:
        raise ValueError(
            f"F does not vanish under the declared constraints "
            f"(grid max {f_grid_max:.3e} of scale); for N >= 2 the middle "
            f"coefficients must vanish too (max {middle_max:.3e})"
        )

    roots = np.asarray(spec.roots, dtype=np.complex128)

    def qbar(u):
        return complex(np.prod(np.sinh(u - roots))) if m else 1.0 + 0.0j

    def lambda_fn(u):
        return complex(
            e_phi * sf.a(u) * qbar(u - eta) / qbar(u)
            + sf.d(u) * qbar(u + eta) / (e_phi * qbar(u))
        )

    front = np.exp(-(n_sites - 2 * m + 2 * k) * eta)
    dplus, fplus = cs.d_plus, cs.f_plus
    if spec.branch == "dd":
        dplus, fplus = fplus, dplus

    def residual_fn():
        out = []
        for lam in roots:
            t1 = front * dplus * sf.a(lam) * qbar(lam - eta)
            t2 = fplus * sf.d(lam) * qbar(lam + eta)
            out.append((t1 + t2) / max(abs(t1), abs(t2), 1e-300))
        return np.asarray(out, dtype=np.complex128)

    report = DegenerateReduction(
        phi=phi, constraint_residual=c_res, f_grid_max=f_grid_max,
        middle_coeff_max=middle_max, extreme_coeff_max=extreme_max,
        spec=spec, k=k,
    )
    return phi, lambda_fn, residual_fn, report


# ---------------------------------------------------------------------------
# JSON wire format for states.

def state_to_dict(state: BetheState) -> dict:
    return {
        "k": state.k,
        "phi": [state.phi.real, state.phi.imag],
        "c": [state.c.real, state.c.imag],
        "roots": [[l.real, l.imag] for l in state.roots],
    }


def state_from_dict(data: dict) -> BetheState:
    return BetheState(
        k=int(data["k"]),
        phi=complex(data["phi"][0], data["phi"][1]),
        roots=tuple(complex(r, i) for r, i in data["roots"]),
        c=complex(data["c"][0], data["c"][1]),
    )


def load_states(path) -> list[BetheState]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "states" in data:
        data = data["states"]
    if isinstance(data, dict):
        data = [data]
    return [state_from_dict(d) for d in data]


def save_states(states, path, extra: dict | None = None):
    payload = {"states": [state_to_dict(s) for s in states]}
    if extra:
        payload.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
