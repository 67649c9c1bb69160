"""Exact thresholds and desk-scale oracles for colour-bias perfect matchings."""

from .constructor import ExtremalSpec, build_extremal, build_tight_cycle_counterexample, finite_colour_degree, min_degree
from .errors import BudgetExceeded, NoPerfectMatching
from .exactmath import ValidPair, canonical_valid_pairs, multinomial, rat_pow
from .hypergraph import ColouredHypergraph
from .thresholds import classify, f_kr, f_pair, f_pair_reduced, f_star, m_conjectured, render_table

__version__ = "0.1.0"
