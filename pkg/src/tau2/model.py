"""Model definition: global parameters, per-site couplings, R- and L-operators.

A chain of N cyclic p-dimensional sites carries eight couplings per site,
(d+, d-, f+, f-, g+, g-, h+, h-), subject to the two integrability
constraints

    g- h- = f- d+      and      g+ h+ = f+ d-      (per site),

plus the requirement d+ f+ != 0 (those products appear in denominators of
the scalar dressing functions).  The crossing parameter is
eta = 2*pi*i*p_prime/p with gcd(p_prime, p) = 1 and p = 2l+1 odd, so that
q = exp(-eta) is a primitive p-th root of unity.

Complex couplings are permitted even though the shipped benchmarks are real;
nothing in the constraints requires reality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import BlockMatrix2, rel_residual, scalar_on_quantum, weyl_pair

CONSTRAINT_TOL = 1e-12


class ValidationError(ValueError):
    """Configuration violates a structural invariant."""


@dataclass(frozen=True)
class SiteParams:
    d_plus: complex
    d_minus: complex
    f_plus: complex
    f_minus: complex
    g_plus: complex
    g_minus: complex
    h_plus: complex
    h_minus: complex

    def as_tuple(self) -> tuple[complex, ...]:
        return (
            self.d_plus, self.d_minus, self.f_plus, self.f_minus,
            self.g_plus, self.g_minus, self.h_plus, self.h_minus,
        )


@dataclass(frozen=True)
class ModelConfig:
    p: int
    sites: tuple[SiteParams, ...]
    p_prime: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def eta(self) -> complex:
        return 2j * np.pi * self.p_prime / self.p

    @property
    def q(self) -> complex:
        return complex(np.exp(-self.eta))

    @property
    def dim(self) -> int:
        return self.p**self.n_sites


@dataclass(frozen=True)
class SiteReport:
    site: int
    minus_residual: float   # relative residual of g- h- = f- d+
    plus_residual: float    # relative residual of g+ h+ = f+ d-
    df_nonzero: bool        # d+ f+ != 0
    zero_couplings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.minus_residual <= CONSTRAINT_TOL
            and self.plus_residual <= CONSTRAINT_TOL
            and self.df_nonzero
        )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]
    site_reports: tuple[SiteReport, ...]


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def validate(config: ModelConfig, tol: float = CONSTRAINT_TOL) -> ValidationReport:
    """Check global and per-site invariants; never raises."""
    problems: list[str] = []
    if config.p < 3 or config.p % 2 == 0:
        problems.append(f"p={config.p} must be odd and >= 3")
    if math.gcd(config.p_prime, config.p) != 1:
        problems.append(f"p_prime={config.p_prime} not coprime to p={config.p}")
    if config.n_sites < 1:
        problems.append("at least one site required")

    site_reports = []
    for n, s in enumerate(config.sites, start=1):
        minus = _rel(s.g_minus * s.h_minus, s.f_minus * s.d_plus)
        plus = _rel(s.g_plus * s.h_plus, s.f_plus * s.d_minus)
        df_ok = s.d_plus * s.f_plus != 0
        zeros = tuple(
            name
            for name, val in zip(
                ("d_plus", "d_minus", "f_plus", "f_minus",
                 "g_plus", "g_minus", "h_plus", "h_minus"),
                s.as_tuple(),
            )
            if val == 0
        )
        rep = SiteReport(n, minus, plus, df_ok, zeros)
        site_reports.append(rep)
        if minus > tol:
            problems.append(f"site {n}: g-h- != f-d+ (residual {minus:.3e})")
        if plus > tol:
            problems.append(f"site {n}: g+h+ != f+d- (residual {plus:.3e})")
        if not df_ok:
            problems.append(f"site {n}: d+f+ = 0")

    return ValidationReport(not problems, tuple(problems), tuple(site_reports))


def require_valid(config: ModelConfig):
    rep = validate(config)
    if not rep.ok:
        raise ValidationError("; ".join(rep.problems))


def r_matrix(u: complex, eta: complex) -> np.ndarray:
    """The six-vertex trigonometric R-matrix on C^2 (x) C^2."""
    su, se = np.sinh(u + eta), np.sinh(complex(eta))
    s = np.sinh(complex(u))
    return np.array(
        [
            [su, 0, 0, 0],
            [0, s, se, 0],
            [0, se, s, 0],
            [0, 0, 0, su],
        ],
        dtype=np.complex128,
    )


@lru_cache(maxsize=32)
def _weyl_cached(p: int, p_prime: int):
    x, z = weyl_pair(p, p_prime)
    x_inv = np.conj(x)          # q^{-m} = conj(q^m) on the unit circle
    z_inv = z.T.copy()
    return x, x_inv, z, z_inv


def l_operator(u: complex, site: int, config: ModelConfig) -> BlockMatrix2:
    """The site-local 2x2 auxiliary-space operator with p x p blocks.

    Blocks: A = e^u d+ X + e^-u d- X^-1,     B = (g+ X^-1 + g- X) Z,
            C = (h+ X^-1 + h- X) Z^-1,       D = e^u f+ X^-1 + e^-u f- X.
    """
    if not 1 <= site <= config.n_sites:
        raise ValueError(f"site {site} out of range 1..{config.n_sites}")
    s = config.sites[site - 1]
    x, x_inv, z, z_inv = _weyl_cached(config.p, config.p_prime)
    eu, emu = np.exp(u), np.exp(-u)
    return BlockMatrix2(
        a=eu * s.d_plus * x + emu * s.d_minus * x_inv,
        b=(s.g_plus * x_inv + s.g_minus * x) @ z,
        c=(s.h_plus * x_inv + s.h_minus * x) @ z_inv,
        d=eu * s.f_plus * x_inv + emu * s.f_minus * x,
    )


def check_rll(u: complex, v: complex, site: int, config: ModelConfig) -> float:
    """Relative residual of the RLL exchange relation at one site.

    R(u-v) (L(u) (x) 1) (1 (x) L(v)) - (1 (x) L(v)) (L(u) (x) 1) R(u-v),
    measured in max-norm relative to the larger side.
    """
    lu = l_operator(u, site, config)
    lv = l_operator(v, site, config)
    r = scalar_on_quantum(r_matrix(u - v, config.eta), config.p)
    lhs = r @ lu.aux_first() @ lv.aux_second()
    rhs = lv.aux_second() @ lu.aux_first() @ r
    return rel_residual(lhs, rhs)


def yang_baxter_residual(u: complex, v: complex, eta: complex) -> float:
    """Relative residual of R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)."""
    eye2 = np.eye(2, dtype=np.complex128)

    def r12(w):
        return np.kron(r_matrix(w, eta), eye2)

    def r23(w):
        return np.kron(eye2, r_matrix(w, eta))

    def r13(w):
        # R.reshape(2,2,2,2)[i,k,j,l] carries out-indices (i,k), in-indices (j,l)
        m = r_matrix(w, eta).reshape(2, 2, 2, 2)
        full = np.einsum("ikjl,mn->imkjnl", m, eye2)
        return full.reshape(8, 8)

    lhs = r12(u - v) @ r13(u) @ r23(v)
    rhs = r23(v) @ r13(u) @ r12(u - v)
    return rel_residual(lhs, rhs)


# ---------------------------------------------------------------------------
# JSON config files: complex numbers are stored as [re, im] pairs.

_PARAM_NAMES = ("d_plus", "d_minus", "f_plus", "f_minus",
                "g_plus", "g_minus", "h_plus", "h_minus")


def _to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _from_pair(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    raise ValidationError(f"complex value must be a number or [re, im], got {v!r}")


def config_to_dict(config: ModelConfig) -> dict:
    return {
        "p": config.p,
        "p_prime": config.p_prime,
        "N": config.n_sites,
        "sites": [
            {name: _to_pair(getattr(s, name)) for name in _PARAM_NAMES}
            for s in config.sites
        ],
    }


def config_from_dict(data: dict) -> ModelConfig:
    try:
        p = int(data["p"])
        sites_raw = data["sites"]
    except KeyError as exc:
        raise ValidationError(f"config missing required field {exc}") from exc
    p_prime = int(data.get("p_prime", 1))
    if "N" in data and int(data["N"]) != len(sites_raw):
        raise ValidationError(
            f"config field N={data['N']} disagrees with {len(sites_raw)} sites"
        )
    sites = []
    for i, raw in enumerate(sites_raw, start=1):
        missing = [name for name in _PARAM_NAMES if name not in raw]
        if missing:
            raise ValidationError(f"site {i} missing parameters: {missing}")
        sites.append(SiteParams(**{name: _from_pair(raw[name]) for name in _PARAM_NAMES}))
    return ModelConfig(p=p, sites=tuple(sites), p_prime=p_prime)


def load_config(path) -> ModelConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def save_config(config: ModelConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2)
        fh.write("\n")
