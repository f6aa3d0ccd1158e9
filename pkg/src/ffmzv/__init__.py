"""Exact arithmetic for power sums and multiple zeta values over curves over finite fields."""

from .combinatorics import (GSequence, carry_free, format_base, g_sequence, multinomial_mod_p,
                            parse_int, sheats_minimality_check, signed_binomial, weighted_sum)
from .curves import (ConditionClass, CurveModel, condition_class, elliptic_curve,
                     expand_at_infinity, hyperelliptic_curve, load_curve, monic_elements,
                     nongap_sequence, projective_line)
from .errors import *  # noqa: F401,F403
from .field import FieldSpec, FqElement, character_power_sum, field_of_order, make_field
from .series import LaurentSeries, agrees, ls_inv, ls_mul, ls_pow
from .zeta import (PrecisionPolicy, ZetaEngine, mzv, nonvanishing_certificate, power_sum,
                   predicted_valuation, recheck_certificate, valuation_gap)

__version__ = "0.1.0"
