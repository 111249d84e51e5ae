"""Quantum circuit simulation, unitary synthesis and classical machine models."""

__version__ = "0.1.0"
