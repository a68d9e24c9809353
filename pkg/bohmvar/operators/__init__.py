from .operator import DiffOperator, Term, Coefficient  # NOQA
from .operator import ConstantCoefficient, CoordinateCoefficient  # NOQA
from .operator import FunctionCoefficient, apply_operator  # NOQA
from .catalog import build_operator, parse_operator, parse_terms  # NOQA
from .catalog import operator_for_state, KINDS  # NOQA
