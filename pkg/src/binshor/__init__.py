"""Reversible-circuit compiler and resource estimator for binary-curve
discrete-logarithm computations."""

__version__ = "0.1.0"
