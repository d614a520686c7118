"""Radiative decoherence of entangled fermion-pair spins as Kraus maps."""

from decoq.channels import Channel, KrausOperator, apply, choi, completeness_defect, tensor_independent
from decoq.entanglement import concurrence, negativity
from decoq.loopfns import LaurentSeries, b0, c0_ir, dilog, virtual_coefficient
from decoq.radiation import (PhysicsConsistencyError, UnresolvedRegion, ap_correspondence_check,
                             delta_rho_pattern, full_map, hard_collinear_channel, soft_channel,
                             splitting_f)
from decoq.states import (Coupling, CouplingKind, DensityMatrix, DomainError, KinematicPoint,
                          bell_state, lo_r_matrix, lo_width, normalize)

__version__ = "0.1.0"
