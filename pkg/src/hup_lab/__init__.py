"""hup_lab: numerical laboratory for Heisenberg uniqueness pairs.

Modules
-------
specfun          Laguerre, Gegenbauer, Bessel and Hermite functions; real zeros.
geometry         Sphere / region quadrature, cones, regions of the plane.
harmonics        Bigraded spherical harmonics, zonal harmonics, Funk–Hecke, geodesic means.
transforms       Symplectic Fourier transform, twisted convolution, special Hermite functions.
weyl             Truncated Weyl transforms and the operators E_A, F_N.
hup_experiments  Cone-rank, spectral-determinacy and annihilation experiments.
cli              ``hup-lab`` command line.
"""
from . import specfun, geometry, harmonics, transforms, weyl, hup_experiments  # noqa: F401

__version__ = "0.1.0"

__all__ = ["specfun", "geometry", "harmonics", "transforms", "weyl", "hup_experiments", "__version__"]
