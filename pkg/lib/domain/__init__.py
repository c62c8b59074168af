"""Pair spaces, their complexes and hearts, and the homology of finite groups."""
