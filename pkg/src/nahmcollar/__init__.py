"""Log-series expansions of self-dual SU(2) connections with Nahm pole
boundary conditions on asymptotically hyperbolic collars."""

from .frame_algebra import (Decomp, FrameModel, GeometryError, bracket_wedge,
                            covariant_ext_d, curvature, decompose, hodge1,
                            hodge2, wedge_bracket_star)
from .log_series import LogLaurentSeries
from .collar_geometry import (ExtrinsicJets, IntrinsicGeometry, MetricJet,
                              check_pe, extrinsic_jets, intrinsic_geometry,
                              weyl_EB)
from .nahm_expansion import (BoundaryData, ConnectionExpansion,
                             ObstructionPair, ResidueClass, ResidueTag,
                             base_connection,
                             classify_residue, expand, is_smooth,
                             normalize_residue, obstruction, rescale_boundary,
                             self_duality_residual, solve_torsion,
                             spin_boundary_value)
from .dynamics import (EnergyReport, FitError, GaugeJet, IntegrationError,
                       StepControl, Trajectory, apply_gauge,
                       boundary_cs_density, chern_simons, collar_energy,
                       energy_report, evolve, laurent_fit, radial_gauge_fix)
from . import presets

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
