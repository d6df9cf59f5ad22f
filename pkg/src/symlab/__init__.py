"""Lie-symmetry verification toolkit for the Chaffee-Infante equation
u_t - u_xx + lambda (u^3 - u) = 0."""

__version__ = "0.1.0"
