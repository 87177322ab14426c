"""Exact arithmetic for Artin-Schreier towers over F_q((t)) and their breaks."""

from .errors import (RamifyError, InsufficientPrecision, WindowTooSmall,
                     DependentGenerators, WrongCharacteristic,
                     NonCoprimeValuation, PreconditionViolated,
                     NonIntegralLower, DegenerateTower, SelfCheckFailed)
from .field_core import (FieldSpec, FqElem, LaurentSeries, field,
                         default_modulus, ff_wp_solve, frobenius_inv,
                         ls_p_power_split, parse_series, format_series,
                         parse_fq, format_fq, DEFAULT_PRECISION)
from .artin_schreier import (Defect, ASGenerator, wp, witt_S,
                             witt_coefficients, reduce_K, break_of,
                             independent_pair, normalized_pair)
from .cp_ext import (CpExtension, ExtElement, ext_valuation, wp_ext,
                     hasse_herbrand, reduce_LK_oracle, witt_term)
from .decomp import DecompData, Q8Prep, decompose, q8_prepare
from .classify import (GroupKind, SubgroupChoice, BreakSequence,
                       ClassificationResult, df_beta2_y1, df_dm_term,
                       lift_break, bound_BG, ubar3, compose_with_kappa3,
                       upper_lower_convert, lower_upper_convert, classify)
from .genlab import (MContext, SymbolicMElement, GeneratorData,
                     build_generators, galois_action, verify_galois,
                     verify_witt_identities, commutator_check, witt_symbolic)

__version__ = '0.1.0'
