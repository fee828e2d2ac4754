"""Exact computer algebra for the Witt algebra and its semi-direct sums W(a,b), W_A(λ), W_B(λ)."""

__version__ = "0.1.0"
