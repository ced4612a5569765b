"""Exact computations for GL(2)-structures on R^(k+1).

The public API is re-exported here; see the submodules for details.
"""

from .scalars import GaussRational, I, render_scalar, to_gauss
from .poly import MultiPoly, RatFunc
from .parsing import ParseError, parse_poly, parse_ratfunc, parse_scalar
from .linalg import SingularMatrixError
from .binary_forms import BinaryForm, Gl2Matrix, act, v_family, w_polynomials, x_family
from .rep import differential_check, rep_algebra, rep_group, xkj_action_decomposition, xkj_closed_form
from .complex_structure import (
    complex_basis_change, jk_matrix, render_xi_row, to_complex_frame, xi_basis,
)
from .normalization import (
    ConnectionCorrection, SingularSystemError, TorsionTensor, block_determinant, bryant_torsion,
    build_normalization, closed_form_determinant, contractions_in_perp, perp_test, perp_values,
)
from .forms import Coframe, DForm, Patch, SingularCoframeError, ext_d, structure_functions, wedge
from .geometry import (
    AnalysisReport, Gl2Structure, analyze, builtin_structure, canonical_connection, complex_decomposition,
    curvature, veronese_null_check,
)

__version__ = "0.1.0"

__all__ = [
    "GaussRational", "I", "render_scalar", "to_gauss", "MultiPoly", "RatFunc", "ParseError",
    "parse_poly", "parse_ratfunc", "parse_scalar", "SingularMatrixError", "BinaryForm", "Gl2Matrix",
    "act", "v_family", "w_polynomials", "x_family", "differential_check", "rep_algebra",
    "rep_group", "xkj_action_decomposition", "xkj_closed_form", "complex_basis_change", "jk_matrix",
    "render_xi_row", "to_complex_frame", "xi_basis", "ConnectionCorrection", "SingularSystemError",
    "TorsionTensor", "block_determinant", "bryant_torsion", "build_normalization",
    "closed_form_determinant", "contractions_in_perp", "perp_test", "perp_values", "Coframe",
    "DForm", "Patch", "SingularCoframeError", "ext_d", "structure_functions", "wedge",
    "AnalysisReport", "Gl2Structure", "analyze", "builtin_structure", "canonical_connection",
    "complex_decomposition", "curvature", "veronese_null_check",
]
