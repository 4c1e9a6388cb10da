"""Link Floer chain complexes over F2[U_w, V_z], basepoint maps and homotopy certificates."""

from .complex import ChainComplex, ChainMap, Grading, apply_coloring, compose, identity, is_chain_map, zero_map
from .derivmaps import cfk_involution, phi, phi_component, psi, psi_arc, psi_component, sarkar_map, tau_map
from .grid import GridDiagram, build_grid_complex, parse_grid
from .homotopy import solve_homotopy, verify_homotopy
from .linkconfig import Arc, Coloring, LinkConfig
from .quasistab import Pipeline, build_pipeline, quasi_stabilize, relation_suite
from .ring import Poly, U, V
from .theorems import homotopy_relations, thm_b_verify, thm_d_verify

__version__ = "0.1.0"

__all__ = [
    "Arc", "ChainComplex", "ChainMap", "Coloring", "Grading", "GridDiagram", "LinkConfig",
    "Pipeline", "Poly", "U", "V", "apply_coloring", "build_grid_complex", "build_pipeline", "cfk_involution",
    "compose", "homotopy_relations", "identity", "is_chain_map", "parse_grid", "phi", "phi_component", "psi",
    "psi_arc", "psi_component", "quasi_stabilize", "relation_suite", "sarkar_map", "solve_homotopy", "tau_map",
    "thm_b_verify", "thm_d_verify", "verify_homotopy", "zero_map",
]
