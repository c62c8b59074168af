"""Quasi-abelian homology engine."""
