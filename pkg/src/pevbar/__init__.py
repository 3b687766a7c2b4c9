"""Executable partial evaluations and bar constructions for monads on finite sets."""
__version__ = "0.1.0"
