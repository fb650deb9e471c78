"""Combinatorial engine for oriented generalized Heegaard surfaces."""
