import numpy as np
import pytest

from tau2 import presets, refine_state
from tau2.spectrum import spectrum_curves


@pytest.fixture(scope="session")
def n1_config():
    return presets.BENCHMARK_N1


@pytest.fixture(scope="session")
def n2_config():
    return presets.BENCHMARK_N2


@pytest.fixture(scope="session")
def n3_config():
    return presets.BENCHMARK_N3


@pytest.fixture(scope="session")
def n2_curves(n2_config):
    return spectrum_curves(n2_config)


@pytest.fixture(scope="session")
def n3_curves(n3_config):
    return spectrum_curves(n3_config)


@pytest.fixture(scope="session")
def refined_states():
    """Newton-refined reference states, keyed by (n_sites, phi)."""
    out = {}
    for n_sites, phi in ((2, 0.0), (2, 1.0), (3, 0.0), (3, 1.0)):
        cfg = presets.benchmark_config(n_sites)
        states = []
        for seed in presets.reference_states(n_sites, phi):
            state, normres, ok = refine_state(seed, cfg, extended=True)
            assert ok, f"seed refinement failed for N={n_sites}, phi={phi}"
            states.append(state)
        out[(n_sites, phi)] = states
    return out


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
