"""Data models for nominal terms: atoms, terms, results and errors"""

from .atoms import Atom, AtomTable, Perm, IDENTITY, swap, fresh_atom
from .terms import Var, Op, Arg, Star, STAR, AlphaClass, BindingSignature, LAMBDA_SIGNATURE
from .results import Strategy, ZeroVerdict, Reached, Diverges, FuelExhausted, Exact, AtMost
from .errors import NominalError

__all__ = [
    'Atom',
    'AtomTable',
    'Perm',
    'IDENTITY',
    'swap',
    'fresh_atom',
    'Var',
    'Op',
    'Arg',
    'Star',
    'STAR',
    'AlphaClass',
    'BindingSignature',
    'LAMBDA_SIGNATURE',
    'Strategy',
    'ZeroVerdict',
    'Reached',
    'Diverges',
    'FuelExhausted',
    'Exact',
    'AtMost',
    'NominalError',
]
