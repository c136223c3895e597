"""Free-energy minimizing crystals in one dimension.

The free energy of a finite union of intervals ``E`` is its boundary count
plus the integral of a potential ``g`` over ``E``. For potentials that are
non-increasing left of the origin and non-decreasing right of it, the
minimizers under a mass constraint are single intervals; this package finds
them and checks that claim numerically.
"""

from .energy import EnergyBreakdown, free_energy, interval_energy_profile, potential_energy
from .errors import (
    Crystal1DError, EmptySet, InputError, MassNonpositive, NoCandidates, NotAdmissible, NotNonnegative,
    QuadratureNonconvergence, WrongCase,
)
from .optimizer import (
    MinimizerResult, bracket_alpha, minimize_translation, stationarity_residual, verify_origin_membership,
)
from .oracle import OracleConfig, OracleReport, enumerate_candidates, oracle_minimize, verify_theorem
from .potential import (
    AdmissibilityReport, Potential, ZeroStructure, check_admissible, classify_zero_structure, family,
    from_dict, from_pieces, load,
)
from .sets import Interval, IntervalUnion, boundary_count, canonicalize, measure, split_signed
from .transport import (
    TransportPlan, build_monotone_map, rearrangement_check, verify_contraction, verify_pushforward,
)

__version__ = "0.1.0"
