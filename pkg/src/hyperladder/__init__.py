"""Hypergeometric-type operators, their ladder structure and coherent states."""

from .cases import CanonicalCase, MSet, capital_lambda, lambda_l, m_set, make_case
from .coherent import (CoherentFamily, CoherentState, MeasureSpec, coherent_family, energy,
                       measure_k, measure_rho, measure_spec, moments, normalizer, overlap, state,
                       verify_moments)
from .errors import HyperladderError
from .hypfun import (HypFunction, apply_A, apply_A_plus, apply_H, associated, classical_oracle, norm,
                     normalized, phi_l)
from .quadrature import half_line_integral, inner_product
from .schrodinger import build_map, ladder_x, potential, psi, superpotential
from .tilde import (DeformedFunction, DeformedParams, apply_tilde_A, apply_tilde_A_plus,
                    deformed_family, deformed_norm_chain, dlambda_dm, ground, tilde_lambda)

__version__ = "0.1.0"

__all__ = [
    "CanonicalCase", "MSet", "capital_lambda", "lambda_l", "m_set", "make_case",
    "CoherentFamily", "CoherentState", "MeasureSpec", "coherent_family", "energy", "measure_k",
    "measure_rho", "measure_spec", "moments", "normalizer", "overlap", "state", "verify_moments",
    "HyperladderError",
    "HypFunction", "apply_A", "apply_A_plus", "apply_H", "associated", "classical_oracle", "norm",
    "normalized", "phi_l",
    "half_line_integral", "inner_product",
    "build_map", "ladder_x", "potential", "psi", "superpotential",
    "DeformedFunction", "DeformedParams", "apply_tilde_A", "apply_tilde_A_plus", "deformed_family",
    "deformed_norm_chain", "dlambda_dm", "ground", "tilde_lambda",
]
