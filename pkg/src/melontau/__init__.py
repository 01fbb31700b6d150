"""melontau: exact-arithmetic workbench for quartic melonic tensor models.

Verifies, order by order in exact Gaussian-rational arithmetic, the chain

    tensor model  ->  intermediate-field matrix model
                  ->  operator decomposition over Hermitian one-matrix models
                  ->  Virasoro constraints, orthogonal polynomials,
                      and deformed Hirota bilinear identities.

Every check reduces to an identity between Laurent polynomials in N with
coefficients in Q(i); "pass" means all residual coefficients are exactly 0.
"""

from .scalars import GaussRat
from .series import Monomial, Series, TruncSpec

__all__ = ["GaussRat", "Monomial", "Series", "TruncSpec"]

__version__ = "0.1.0"
