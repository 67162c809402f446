"""Multilevel quantum-circuit optimizer for PDE Hamiltonian-simulation circuits."""

__version__ = "0.1.0"
