"""Model checking and reduction gadgets for one-counter processes."""

from .arith import (CrrAssignment, DomainError, bit, crr, crt_reconstruct, lcm_upto,
                    parity_divisible_count, primes_first)
from .checker import (BoundedOracle, InfeasibleError, PeriodParameters, SatTable, check,
                      evaluate_capped, evaluate_periodic, evaluate_three_valued, oracle_check,
                      period_params, representative)
from .ctl import CtlSyntaxError, desugar, is_ef, lud, parse, render, size
from .ocp import (Configuration, Nfa, Ocp, StructuralError, is_net, nfa_accepts,
                  normalize_weighted, parse_nfa, parse_ocp, render_nfa, render_ocp, successors)

__version__ = "0.1.0"
