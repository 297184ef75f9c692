"""Exact twisted Alexander modules and polynomials of finite presentations.

Coefficients live in ``Q`` or a cyclotomic field ``Q(zeta_m)``; modules are
computed over the Laurent ring ``F[t, t^-1]`` with Fox calculus and the
Smith normal form.
"""

__version__ = "0.1.0"

from .errors import (DescriptorMismatch, IndexOutOfRange, SyntaxProblem, TwistAlexError,
                     ValidationError)
from .field import (RATIONALS, FieldDescriptor, FieldElement, cyclotomic_field, parse_element,
                    parse_field)
from .laurent import (LaurentPolynomial, divides, gcd, normalize, parse_laurent, roots_contained,
                      strip_roots, xgcd)
from .linalg import (AlexanderModule, RingMatrix, cokernel_module, determinant,
                     elementary_divisors, homology_module, rank_over_fractions,
                     smith_normal_form)
from .presentation import (FreeRingElement, Presentation, Word, a_singularity_link,
                           fox_derivative, fox_jacobian, free_group, hopf_link,
                           parse_presentation, render_presentation)
from .twisted import (InvalidSetup, TwistedSetup, alexander_module, alexander_modules,
                      alexander_polynomial, build_complex, cohomological_polynomial, make_setup,
                      specialize, wada_quotient)
from .analysis import (WeightMismatch, check_divisibility, check_splitting, corollary_bound,
                       torsion_certificate)

__all__ = [name for name in dir() if not name.startswith("_")]
