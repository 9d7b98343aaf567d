"""Numerical certification of the helium Hamiltonian as an edge-degenerate operator."""
from .charts import Chart, HyperPoint, metric_closed_form, metric_pullback, to_cartesian, to_hyper
from .edge_kernel import BesselHalfOrder, FredholmData, Kind, bessel_half, fredholm_data
from .hamiltonian import apply_cartesian, apply_corner, apply_edge, coeff_h, coeff_v
from .symbols import Covector, EdgeSymbolParams, conormal_spectrum, sigma_psi, sigma_psi_tilde

__version__ = "0.1.0"
