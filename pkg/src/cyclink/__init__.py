"""Root-of-unity state sums for planar link diagrams."""

from .arith import ModularContext, bracket, conjugate_context, make_context, pochhammer, theta
from .charge import (
    ChargeAssignment,
    ChargeSystem,
    build_system,
    solve_charges,
    verify_charges,
)
from .diagram import (
    Crossing,
    LinkDiagram,
    TangleDiagram,
    apply_move,
    compute_faces,
    cut_tangle,
    link_components,
    mirror_diagram,
    parse_pd,
)
from .rmatrix import (
    RSymbolArgs,
    RTensor,
    r_inverse,
    r_matrix,
    r_symbol,
    verify_inverse,
    verify_kink,
    verify_symmetries,
    verify_ybe,
    weight_w,
)
from .statesum import (
    ContractionPlan,
    TensorNetwork,
    brute_force,
    build_network,
    contract,
    evaluate,
    invariant,
    invariant_of_diagram,
    plan_contraction,
)
from .tetra import (
    FermatTriple,
    TetraData,
    fermat_w,
    fermat_w_pair,
    half_omega,
    octahedron_check,
    psi,
    t_symbol,
    tbar_symbol,
)

__version__ = "0.1.0"

__all__ = [
    "ModularContext", "make_context", "conjugate_context", "pochhammer", "theta",
    "bracket",
    "RSymbolArgs", "RTensor", "weight_w", "r_symbol", "r_matrix", "r_inverse",
    "verify_ybe", "verify_inverse", "verify_kink", "verify_symmetries",
    "Crossing", "LinkDiagram", "TangleDiagram", "parse_pd", "compute_faces",
    "cut_tangle", "apply_move", "mirror_diagram", "link_components",
    "ChargeAssignment", "ChargeSystem", "build_system", "solve_charges",
    "verify_charges",
    "TensorNetwork", "ContractionPlan", "brute_force", "build_network",
    "plan_contraction", "contract", "evaluate", "invariant",
    "invariant_of_diagram",
    "FermatTriple", "TetraData", "half_omega", "fermat_w", "fermat_w_pair",
    "t_symbol", "tbar_symbol", "psi", "octahedron_check",
]
