"""Exact multiple Dirichlet series over F_q(T)."""

__version__ = "0.1.0"
