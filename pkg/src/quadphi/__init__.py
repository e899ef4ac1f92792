"""Oscillatory matrix functions phi_0(A)..phi_L(A) by quadruple-angle scaling and restoring."""
from .core import QuadPhiRun, phi_action, quad_step, quadphi, quadphi_run
from .dense import as_matrix, count_products, matmul, one_norm
from .family import PhiFamily
from .params import THETA_TABLE, ScalingPlan, ThetaTable, select_parameters, solve_theta

__all__ = [
    "PhiFamily",
    "QuadPhiRun",
    "ScalingPlan",
    "THETA_TABLE",
    "ThetaTable",
    "as_matrix",
    "count_products",
    "matmul",
    "one_norm",
    "phi_action",
    "quad_step",
    "quadphi",
    "quadphi_run",
    "select_parameters",
    "solve_theta",
]

__version__ = "0.1.0"
