"""Sturmian words, Sturmian numbers and contracted rotations.

Slopes use the notation quad:(p+sqrt(d))/q, cf:[a1,a2|b1,...] or dec:x±e;
intercepts rat:p/q, mult:j ({j theta}) or dec:x±e; contraction factors p/q
or quad:(p+sqrt(d))/q. Exact results are fractions.Fraction, enclosures are
(lo, hi) pairs of fractions.
"""

from ._core import (
    DomainError,
    Error,
    ParseError,
    ResolutionExceeded,
    approximant,
    cantor_gaps,
    cli,
    convergents,
    decompose,
    delta_of,
    dependence_witness,
    evaluate,
    expand,
    membership,
    orbit,
    phi,
    rotation_number,
    run_suite,
    schedule,
    standard_word,
    transcendence_form,
    word,
    word_variants,
)

__all__ = [
    "DomainError",
    "Error",
    "ParseError",
    "ResolutionExceeded",
    "approximant",
    "cantor_gaps",
    "cli",
    "convergents",
    "decompose",
    "delta_of",
    "dependence_witness",
    "evaluate",
    "expand",
    "membership",
    "orbit",
    "phi",
    "rotation_number",
    "run_suite",
    "schedule",
    "standard_word",
    "transcendence_form",
    "word",
    "word_variants",
]
