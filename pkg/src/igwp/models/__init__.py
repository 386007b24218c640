"""Statistical-model zoo: closed-form metrics and connection families."""

from .takano import TakanoSpace, takano_geometry, takano_warped_spec
from .simplex import (SimplexFamily, DenormalizedFamily, simplex_fisher,
                      simplex_alpha_connection, denormalization_geometry)
from .quantum import (MonotoneConeModel, BKM, SLD, monotone_metric_2x2,
                      bkm_cone_geometry, mixture_connection_action,
                      density_matrix_fiber)
from .elliptic import (EllipticFamily, elliptic_constants,
                       elliptic_closed_form_constants, elliptic_geometry,
                       upper_half_plane_metric)

__all__ = [
    "TakanoSpace", "takano_geometry", "takano_warped_spec",
    "SimplexFamily", "DenormalizedFamily", "simplex_fisher",
    "simplex_alpha_connection", "denormalization_geometry",
    "MonotoneConeModel", "BKM", "SLD", "monotone_metric_2x2",
    "bkm_cone_geometry", "mixture_connection_action", "density_matrix_fiber",
    "EllipticFamily", "elliptic_constants", "elliptic_closed_form_constants",
    "elliptic_geometry", "upper_half_plane_metric",
]
