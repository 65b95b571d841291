"""Numerical calculus for finite particle measures on R^d and S^{d-1}.

Thin wrapper over the C++ core: manifolds, particle measures, the derivative
notions (extrinsic, centered, intrinsic, geodesic-shift, gradient forms), the
p-Wasserstein-style metric between finite measures, and the seeded identity
verification suites.
"""

from ._core import (
    DerivativeEstimate,
    DomainError,
    FDConfig,
    FlowConfig,
    Functional,
    InputError,
    Manifold,
    NumericError,
    ParticleMeasure,
    VerificationReport,
    builtin_functional,
    bump_h,
    bump_h_prime,
    centered,
    extrinsic,
    grad_extrinsic,
    intrinsic,
    l_directional,
    l_field,
    run_suites,
    suite_names,
    wasserstein,
)

__version__ = "0.1.0"

__all__ = [
    "DerivativeEstimate",
    "DomainError",
    "FDConfig",
    "FlowConfig",
    "Functional",
    "InputError",
    "Manifold",
    "NumericError",
    "ParticleMeasure",
    "VerificationReport",
    "builtin_functional",
    "bump_h",
    "bump_h_prime",
    "centered",
    "extrinsic",
    "grad_extrinsic",
    "intrinsic",
    "l_directional",
    "l_field",
    "run_suites",
    "suite_names",
    "wasserstein",
    "__version__",
]
