"""qheun: exact tools for q-Heun-type three-term q-difference equations.

Subpackages cover the exact arithmetic kernel (symkernel), the equation
type with Newton diagrams and taxonomy (qdiff), gauge transformations
(gauge), Lax-data catalogs with scalar elimination and table verification
(lax), local series analysis (local), the q->1 continuum limit (climit),
the Heun-class ODE catalog (odeheun), and the command line (cli).
"""

__version__ = "0.1.0"

from .symkernel import (MPoly, RatFun, Rational, parse_expr, ratfun_eq,
                        rat, sym)
from .qdiff import (QDiffEq, ThreeTermRelation, TaxonomyLabel, classify,
                    equations_equal, newton_diagram, render_diagram)
from .gauge import (gauge_linear, gauge_move_factor, gauge_power,
                    invert_variable, rebase)
from .lax import (KNY_FAMILIES, KNY_GAUGED, KNYOperator, KNYParams,
                  InvariantViolation, LaxMatrix, MURATA_FAMILIES,
                  MurataParams, SubstitutionSingular, accessory_formula,
                  build_kny, build_murata, derive_equation, kny_to_equation,
                  reference_equation, scalar_reduce, specialize,
                  verify_family)
from .local import (CharData, DegenerateEquation, Resonance, SeriesSolution,
                    UnboundParameter, char_exponents, residual,
                    series_solution)
from .climit import (AllZero, EpsilonFamily, HeunODE, IrregularAtZero,
                     LimitData, LimitDiverges, Unclassifiable, classify_ode,
                     crosscheck, emit_ode, limit_coefficients, ode_series,
                     preset_family, preset_names, preset_note, preset_target,
                     richardson_limit)
from .odeheun import (BHEParams, CHEParams, ConstraintViolation, DHEParams,
                      HEParams, HeunParams, NoMatch, PARAM_CLASSES,
                      THEParams, match_class, to_operator)

__all__ = ["MPoly", "RatFun", "Rational", "parse_expr", "ratfun_eq",
           "rat", "sym",
           "QDiffEq", "ThreeTermRelation", "TaxonomyLabel", "classify",
           "equations_equal", "newton_diagram", "render_diagram",
           "gauge_linear", "gauge_move_factor", "gauge_power",
           "invert_variable", "rebase",
           "KNY_FAMILIES", "KNY_GAUGED", "KNYOperator", "KNYParams",
           "InvariantViolation", "LaxMatrix", "MURATA_FAMILIES",
           "MurataParams", "SubstitutionSingular", "accessory_formula",
           "build_kny", "build_murata", "derive_equation",
           "kny_to_equation", "reference_equation", "scalar_reduce",
           "specialize", "verify_family",
           "CharData", "DegenerateEquation", "Resonance", "SeriesSolution",
           "UnboundParameter", "char_exponents", "residual",
           "series_solution",
           "AllZero", "EpsilonFamily", "HeunODE", "IrregularAtZero",
           "LimitData", "LimitDiverges", "Unclassifiable", "classify_ode",
           "crosscheck", "emit_ode", "limit_coefficients", "ode_series",
           "preset_family", "preset_names", "preset_note", "preset_target",
           "richardson_limit",
           "BHEParams", "CHEParams", "ConstraintViolation", "DHEParams",
           "HEParams", "HeunParams", "NoMatch", "PARAM_CLASSES",
           "THEParams", "match_class", "to_operator", "__version__"]
