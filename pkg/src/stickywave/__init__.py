"""Sticky-particle approximation of 1-D scalar conservation laws and
diagonal hyperbolic systems, with W1 quantization of the initial data."""

from .fluxes import (FieldModel, FluxModel, PSystemModel, builtin_scalar,
                     parse_field, parse_flux, psystem_fields, psystem_recover)
from .measures import (DiscreteMeasure, Measure1D, chi_quantize,
                       optimal_quantize, parse_measure, tail_rate_fit, w1,
                       w1_upper_bound_sqrt)
from .mspd import (MultiConfig, collision_count, collision_ledger, duplicate,
                   iterated_tspd, mspd_exact, multi_l1, ranks, tspd_step,
                   tspd_velocities)
from .references import (burgers_delta_entropy, burgers_delta_particle_error,
                         concave_reference, l1_vs_reference,
                         two_rarefaction_check)
from .spd import (EmpiricalCDF, ParticleConfig, cluster_partition,
                  convex_minorant, empirical_cdf, flow_check, free_transport,
                  init_velocities, l1_distance, spd_positions,
                  spd_positions_event_driven)

__version__ = "0.1.0"
