"""Engines: nominal sets, signatures, infinitary terms, lambda calculus and trees"""

__version__ = "1.0.0"
