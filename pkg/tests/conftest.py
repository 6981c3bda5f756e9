"""Shared fixtures and independent numerical oracles.

The oracles deliberately avoid the package's own quadrature: K0 reference
values come from the integral representation via QUADPACK, and radial
pairings are cross-checked with scipy.integrate.quad.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad as sciquad

from delta2d import make_bump


def k0_oracle(x):
    """K0 via its integral representation int_0^inf exp(-x*cosh t) dt."""
    t_max = math.acosh(745.0 / x) if x < 745.0 else 1.0
    val, _ = sciquad(lambda t: math.exp(-x * math.cosh(t)), 0.0, t_max,
                     epsabs=1e-300, epsrel=1e-13, limit=300)
    return val


def radial_oracle(g, lo, hi, singular_at_zero=False):
    """2*pi*int g(r) r dr by QUADPACK, independent of integrate_radial."""
    f = lambda r: 2.0 * math.pi * r * g(r)
    kwargs = dict(epsabs=1e-13, epsrel=1e-12, limit=500)
    if singular_at_zero and lo == 0.0:
        val = 0.0
        edges = [0.0] + [hi * 2.0 ** (-k) for k in range(40, -1, -1)]
        for a, b in zip(edges[:-1], edges[1:]):
            val += sciquad(f, a, b, **kwargs)[0]
        return val
    return sciquad(f, lo, hi, **kwargs)[0]


def suite_bumps():
    """The standard test-function battery: amplitudes {1,2} x radii
    {0.5,1,2,5} at the origin, plus off-center variants that exclude the
    origin from their support."""
    bumps = [make_bump(a, r) for a in (1.0, 2.0) for r in (0.5, 1.0, 2.0, 5.0)]
    bumps += [make_bump(1.0, 1.0, (5.0, 0.0)),
              make_bump(2.0, 2.0, (0.0, -3.0)),
              make_bump(1.0, 0.5, (1.5, 0.0))]
    return bumps


@pytest.fixture(scope="session")
def suite():
    return suite_bumps()
