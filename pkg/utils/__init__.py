"""Utility modules: parsing, formatting, validation and caching"""

__version__ = "1.0.0"
