"""Cone-rank experiment on three cones in C^2.

Prints, for each cone, the smallest/largest singular value ratio of the map from
band-limited sphere densities (bidegree <= L) to symplectic-transform samples on
the cone, the numerical nullity, and the number of independent harmonics that
vanish on the sampled directions (counted directly, without transforms).

    python demos/cone_rank_demo.py
"""
import numpy as np

from hup_lab import hup_experiments as hx
from hup_lab.geometry import sample_cone
from hup_lab.harmonics import BigradedPolynomial

L = 3
Y = BigradedPolynomial.from_dict(2, {((1, 0), (1, 0)): 1.0, ((0, 1), (0, 1)): -1.0})

cones = {
    "H-cone, a=4": (hx.h_cone(2, 4.0), 16),
    "24 complex lines": (hx.lines_cone(2, 24), 24),
    "zero set of |z1|^2-|z2|^2": (hx.harmonic_cone(Y), 16),
}

print(f"{'cone':<28s} {'sigma_min/max':>14s} {'nullity':>8s} {'direct':>7s}  outcome")
for name, (cone, samples) in cones.items():
    rep = hx.hup_rank(hx.RankExperimentConfig(n=2, L=L, samples=samples), cone)
    d = rep.details
    print(f"{name:<28s} {d['sigma_ratio']:14.3e} {d['nullity']:8d} {d['direct_vanishing_count']:7d}  {rep.outcome}")

# Why the H-cone has a nullspace: a z1 conj(z2) + |z|^2 = 0 forces z1 conj(z2) to be
# real, so the harmonic Im(z1 conj(z2)) vanishes on the whole cone.
pts = sample_cone(hx.h_cone(2, 4.0), 200, np.random.default_rng(0))
print("max |Im(z1 conj z2)| on 200 H-cone points:", float(np.max(np.abs(np.imag(pts[:, 0] * pts[:, 1].conj())))))

rep = hx.hup_rank(hx.RankExperimentConfig(n=2, L=L), hx.harmonic_cone(Y))
print("distance of Y's coefficients from the harmonic-cone nullspace:",
      hx.nullspace_distance(rep, hx.coefficient_vector(Y, 2, L)))
