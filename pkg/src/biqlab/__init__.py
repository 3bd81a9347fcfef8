"""Exact classification tools for torus biquotients of products of spheres."""

__version__ = "0.1.0"

from .lattice import AbelianGroup, cokernel, det, minors_gcd, smith_normal_form  # noqa: E402
from .kernels import BACKEND  # noqa: E402

__all__ = ["AbelianGroup", "BACKEND", "cokernel", "det", "minors_gcd", "smith_normal_form",
           "__version__"]
