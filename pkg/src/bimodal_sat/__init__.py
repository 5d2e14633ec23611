"""Satisfiability of bimodal formulas in K4xS5, S4xS5 and SSL by search over
tableau-clouds, with countermodel extraction."""

from .formula import Formula, ParseError, lengths, parse, render, subformulas
from .models import Model, check_frame, model_check, model_from_tableau, tableau_from_model
from .oracle import exhaustive_search, verify_partial_tableau
from .solver import SearchOptions, Verdict, alg_rec, count_tableau_sets, solve
from .tableau import Logic, universe

__all__ = [
    "Formula", "ParseError", "lengths", "parse", "render", "subformulas",
    "Model", "check_frame", "model_check", "model_from_tableau", "tableau_from_model",
    "exhaustive_search", "verify_partial_tableau",
    "SearchOptions", "Verdict", "alg_rec", "count_tableau_sets", "solve",
    "Logic", "universe",
]
