"""Generalised Schmidt decomposition for pure states of three or more parts."""
from .altforms import (classical_schmidt, iu_descend, iu_directional_derivative, iu_entropy,
                       iu_gradient, marginal_basis_form, marginal_orthogonality)
from .canonical import CanonicalForm, canonicalize, sort_modes, strip_trivial_modes, unsort_modes
from .config import TOL, Tolerances
from .maximizer import (MaximizerOptions, ProductCritical, SubspaceConstraint, multistart_maximize,
                        power_iterate, stationarity_residual, stationary_points)
from .oracle import AppendixFamily, appendix_verify, brute_force_max
from .orbit import ConditionReport, OrbitInfo, check_conditions, orbit_info
from .stateio import load_state, save_state, state_from_json, state_to_json
from .tensor import (LocalUnitaryTuple, ModeShape, NormalizationError, NotUnitaryError, ShapeError,
                     StateTensor, apply_local, environment, haar_unitary, overlap,
                     random_local_unitaries, random_state, reduced_density)

__version__ = "0.1.0"
