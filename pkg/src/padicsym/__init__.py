"""padicsym: exact p-adic measure calculus and local L-factor algebra.

The package provides, in matching modules:

- ``padic``      fixed-precision Z_p / Q_p arithmetic with precision tracking;
- ``polyspace``  bi-homogeneous polynomial modules with monoid actions and the
                 Clebsch-Gordan decomposition;
- ``iwasawa``    truncations of the completed group algebra O[[Z_p^x]] and
                 weight specializations;
- ``measures``   test functions and measures on Z_p x Z_p, weight actions and
                 the U_p coset operator;
- ``evaluation`` moment maps, trivial-component evaluations, the support
                 discrepancy identity and the interpolation pipeline;
- ``eichler``    the symbolic harmonic-form expansion engine;
- ``euler``      exact local L-factor algebra and the factorization checker;
- ``cli``        the ``padicsym`` command-line verification harness.
"""

from .padic import PadicNumber, binomial, teichmuller
from .polyspace import (HomPoly, MonoidMatrix, TensorPoly, act_poly,
                        cg_decompose, cg_reconstruct, nabla, trivial_projection)
from .iwasawa import THETA, IwasawaElement, WeightCharacter, theta
from .measures import (AtomicMeasure, CellFn, CellMeasure, PolyFn, ProductFn,
                       ThetaFn, u_p, weight_action)
from .evaluation import (SymbolClass, assemble_padic_L, big_pi,
                         discrepancy_check, ev, interpolation_check, l_small,
                         rho_k)
from .eichler import FormalExpr, es_form, project_trivial_form, restrict_to_Q
from .euler import (EulerFactorSeries, HeckeDatum, adjoint_factor, asai_series,
                    base_change, check_factorization, dirichlet_factor)

__all__ = [
    "PadicNumber", "binomial", "teichmuller",
    "HomPoly", "MonoidMatrix", "TensorPoly", "act_poly", "cg_decompose",
    "cg_reconstruct", "nabla", "trivial_projection",
    "THETA", "IwasawaElement", "WeightCharacter", "theta",
    "AtomicMeasure", "CellFn", "CellMeasure", "PolyFn", "ProductFn", "ThetaFn",
    "u_p", "weight_action",
    "SymbolClass", "assemble_padic_L", "big_pi", "discrepancy_check", "ev",
    "interpolation_check", "l_small", "rho_k",
    "FormalExpr", "es_form", "project_trivial_form", "restrict_to_Q",
    "EulerFactorSeries", "HeckeDatum", "adjoint_factor", "asai_series",
    "base_change", "check_factorization", "dirichlet_factor",
]

__version__ = "0.1.0"
