"""High-precision density and energy bounds for the E8 and Leech packings.

The package builds polynomial-times-Gaussian radial functions whose forced
roots sit on (possibly perturbed) lattice vector lengths, evaluates the
resulting linear-programming bounds, and measures the rich structure of
the builds: Taylor and Mellin rationality, complex root geometry, energy
certificates, and single-root Fourier eigenfunctions.
"""

__version__ = "0.1.0"

from .mpnum import (BigPoly, NoConvergence, PrecisionContext, SingularMatrix,
                    UnsupportedArgument, cluster_roots, gamma_half_integer,
                    poly_roots, solve_linear)
from .polybasis import (LaguerreBasis, RadialFunction, build_basis,
                        eval_profile, eval_radial, radial_derivative, transform)
from .lattice import E8, LEECH, get_lattice, lattice_sum, shell_counts, vector_lengths
from .schedule import RootSchedule, modified_schedule, naive_schedule
from .magic import (BoundReport, RadialPair, build_pair, build_pair_full,
                    density_bound, validate_signs)
from .analysis import (RootAtlas, convergence_digits, fprime_check,
                       match_roots, mellin_symmetry_check, mellin_value,
                       ratio_formula, root_atlas, taylor_coefficients)
from .energy import build_h, conjecture61_check, duality_transform
from .eigensingle import (EigenSingle, build_single, closed_form_ratio_test,
                          extra_root_variant, imaginary_roots)

__all__ = [
    "__version__",
    "PrecisionContext", "BigPoly", "solve_linear", "poly_roots",
    "cluster_roots", "gamma_half_integer",
    "SingularMatrix", "NoConvergence", "UnsupportedArgument",
    "LaguerreBasis", "RadialFunction", "build_basis", "transform",
    "eval_radial", "eval_profile", "radial_derivative",
    "E8", "LEECH", "get_lattice", "vector_lengths", "shell_counts", "lattice_sum",
    "RootSchedule", "naive_schedule", "modified_schedule",
    "RadialPair", "BoundReport", "build_pair", "build_pair_full",
    "density_bound", "validate_signs",
    "RootAtlas", "root_atlas", "match_roots", "taylor_coefficients",
    "mellin_value", "mellin_symmetry_check", "fprime_check", "ratio_formula",
    "convergence_digits",
    "build_h", "conjecture61_check", "duality_transform",
    "EigenSingle", "build_single", "closed_form_ratio_test",
    "imaginary_roots", "extra_root_variant",
]
