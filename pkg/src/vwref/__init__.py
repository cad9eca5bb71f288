"""Exact reference engine for refined sheaf-counting invariants on K3 and general type surfaces."""
