from .push import MAX_REFINE, d_of, image_arc, key_polynomial, pushforward
from .degrees import DegreeReport, Recurrence, degree_sequence, degree_sequence_bruteforce, detect_recurrence
from .eigen import EigenReport, certify_fixed, eigenvaluation, monomial_candidates, solve_monomial_fixed
from .classify import (Classification, TFSegment, classify, conjugate, extends_to_weighted_P2,
                       fixed_monomial_set, jacobian_formula_check, non_properness_witness, tf_segment)

__all__ = [
    "MAX_REFINE", "d_of", "image_arc", "key_polynomial", "pushforward",
    "DegreeReport", "Recurrence", "degree_sequence", "degree_sequence_bruteforce", "detect_recurrence",
    "EigenReport", "certify_fixed", "eigenvaluation", "monomial_candidates", "solve_monomial_fixed",
    "Classification", "TFSegment", "classify", "conjugate", "extends_to_weighted_P2",
    "fixed_monomial_set", "jacobian_formula_check", "non_properness_witness", "tf_segment",
]
