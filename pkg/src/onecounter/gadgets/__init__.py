"""Generators for the hardness constructions, each with a brute-force oracle."""

from .boolean import (BAnd, BConst, BNot, BOr, BoolFormula, BVar, Qbf, bool_eval, parse_bool,
                      parse_dimacs, parse_qbf, qbf_valid, render_bool, render_qbf)
from .circuits import LayeredCircuit, ef_of_circuit, ocn_of_circuit
from .crr import (Bot, Conj, CrrFormula, Disj, GadgetOcn, Lit, Neg, Top, crr_equals_formula,
                  crr_eval, crr_formula_of_predicate, crr_size, eliminate_negations,
                  fixed_ef_formula, leafstring, leafstring_oracle, ocn_of_crr_formula,
                  parse_crr, prop1_goal, push_negations, render_crr, serial_compose)
from .fig7 import figure7, mu, phi_div, psi_bit, qbf_reduce
from .wagner import lexmax_even_oracle, wagner_reduce

__all__ = [name for name in dir() if not name.startswith("_")]
