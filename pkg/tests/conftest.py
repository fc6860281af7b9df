"""Shared helpers: random potential generators and independent closed-form
references (kept deliberately separate from the package code paths they
check)."""

import math
import cmath

import numpy as np
import pytest

from barrier1d.potential import Constant, Linear, Potential, Sampled, Segment, UnitSystem


@pytest.fixture(scope="session")
def units():
    return UnitSystem()


def random_slab_potential(rng, n_min=2, n_max=6, h_lo=-0.8, h_hi=1.5,
                          w_lo=0.3, w_hi=1.4):
    """Random piecewise-constant potential with moderate opacity."""
    n = int(rng.integers(n_min, n_max + 1))
    segs = tuple(
        Segment(float(rng.uniform(w_lo, w_hi)),
                Constant(float(rng.uniform(h_lo, h_hi))))
        for _ in range(n)
    )
    return Potential(segs)


def random_smoothish_potential(rng):
    """Mix of constant, linear and sampled segments."""
    segs = []
    for _ in range(int(rng.integers(2, 5))):
        w = float(rng.uniform(0.4, 1.2))
        kind = rng.integers(0, 3)
        if kind == 0:
            segs.append(Segment(w, Constant(float(rng.uniform(-0.5, 1.3)))))
        elif kind == 1:
            h0 = float(rng.uniform(-0.4, 1.2))
            sl = float(rng.uniform(-0.8, 0.8))
            segs.append(Segment(w, Linear(h0, sl)))
        else:
            hs = tuple(float(rng.uniform(-0.4, 1.2))
                       for _ in range(int(rng.integers(3, 7))))
            segs.append(Segment(w, Sampled(hs)))
    return Potential(tuple(segs))


def random_chain(rng, n_barriers=None):
    """(whole potential, barrier pieces, gap lengths, E) for fold tests."""
    nb = int(rng.integers(2, 5)) if n_barriers is None else n_barriers
    pieces, gaps, segs = [], [], []
    for i in range(nb):
        w = float(rng.uniform(0.4, 1.5))
        h = float(rng.uniform(-0.6, 1.4))
        pieces.append(Potential((Segment(w, Constant(h)),)))
        segs.append(Segment(w, Constant(h)))
        if i < nb - 1:
            g = float(rng.uniform(0.0, 1.8))
            gaps.append(g)
            if g > 0.0:
                segs.append(Segment(g, Constant(0.0)))
    E = float(rng.uniform(0.3, 2.2))
    return Potential(tuple(segs)), pieces, gaps, E


# ----------------------------------------------------------------------
# independent closed forms (textbook results, natural units)

def rect_barrier_D(U, a, E):
    """Tunnelling transmittance of one rectangular barrier, E < U."""
    kap = math.sqrt(U - E)
    return 1.0 / (1.0 + U * U * math.sinh(kap * a) ** 2 / (4.0 * E * (U - E)))


def step_D(E, v_right):
    k1 = math.sqrt(E)
    k2 = math.sqrt(E - v_right)
    return 4.0 * k1 * k2 / (k1 + k2) ** 2


def single_finite_well_depths(U, a):
    """Bound depths below the top of a finite square well (both-sided),
    from the even/odd transcendental equations."""
    from scipy.optimize import brentq
    roots = []

    def even(E):
        q = math.sqrt(U - E)
        return q * math.tan(q * a / 2.0) - math.sqrt(E)

    def odd(E):
        q = math.sqrt(U - E)
        return -q / math.tan(q * a / 2.0) - math.sqrt(E)

    es = np.linspace(U * 1e-9, U * (1 - 1e-12), 200_000)
    for f in (even, odd):
        vals = np.array([f(e) for e in es])
        ok = np.isfinite(vals) & (np.abs(vals) < 1e3)
        for i in range(es.size - 1):
            if ok[i] and ok[i + 1] and vals[i] * vals[i + 1] < 0.0:
                roots.append(brentq(f, es[i], es[i + 1], rtol=1e-14))
    return sorted(roots)


def kronig_penney_band_edges(V0, b, L, e_max, n_scan=40_000):
    """Band edges of the single-barrier periodic cell from the standard
    dispersion relation |f(E)| = 1 (complex-continued across E = V0)."""
    from scipy.optimize import brentq

    def f(E):
        q = cmath.sqrt(complex(E))
        k0 = cmath.sqrt(complex(E - V0))
        if abs(k0) < 1e-12 or abs(q) < 1e-12:
            return 2.0
        val = (cmath.cos(k0 * b) * cmath.cos(q * (L - b))
               - (k0 * k0 + q * q) / (2.0 * q * k0)
               * cmath.sin(k0 * b) * cmath.sin(q * (L - b)))
        return val.real

    es = np.linspace(e_max * 1e-6, e_max, n_scan)
    vals = np.array([f(e) for e in es])
    inside = np.abs(vals) <= 1.0
    edges = []
    for i in range(es.size - 1):
        if inside[i] != inside[i + 1]:
            edges.append(brentq(lambda e: abs(f(e)) - 1.0, es[i], es[i + 1],
                                xtol=1e-14))
    return edges, inside
