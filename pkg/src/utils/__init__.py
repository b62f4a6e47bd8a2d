"""Combinatorial helpers and file formats."""
