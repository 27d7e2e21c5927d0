"""Simulation and optimisation toolkit for flexible-position MIMO."""

__version__ = "0.1.0"
