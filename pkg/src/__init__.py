"""Causal razors: which DAGs each causal-discovery assumption accepts for a given independence model."""

__version__ = "0.1.0"
