"""Monadic second-order logic over finite words."""
__version__ = "0.1.0"
