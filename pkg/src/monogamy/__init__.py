"""Numerical certification of monogamy-of-entanglement bounds for subspace coset states."""

__version__ = "0.1.0"
