import math

import numpy as np
import pytest

from pickuplab import _backend, analysis, circuit_model

BACKENDS = _backend.available()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per importable kernel implementation."""
    mod = BACKENDS[request.param]
    monkeypatch.setattr(circuit_model, "kernels", mod)
    monkeypatch.setattr(analysis, "kernels", mod)
    return request.param


def dense_argmax(R, L, C, lo, hi, n=1_000_000):
    """Brute-force peak of |Z| for R+jwL shunted by C, on a log grid.

    Written directly from the network definition; shares no code with the
    package.
    """
    f = np.geomspace(lo, hi, n)
    w = 2 * math.pi * f
    zl = R + 1j * w * L
    zc = 1 / (1j * w * C)
    mag = np.abs(zl * zc / (zl + zc))
    k = int(np.argmax(mag))
    return f[k], mag[k]


def random_parallel_params(rng, q_min=10.0, q_max=200.0):
    """L in [1, 10] H, C in [50, 500] pF, R chosen for a Q in [q_min, q_max]."""
    L = rng.uniform(1.0, 10.0)
    C = rng.uniform(50e-12, 500e-12)
    q = math.exp(rng.uniform(math.log(q_min), math.log(q_max)))
    R = math.sqrt(L / C) / q
    return circuit_model.LcrParams(R, L, C)
