"""Proof-theory workbench for bilattice logic with conflation."""

__version__ = "0.1.0"
