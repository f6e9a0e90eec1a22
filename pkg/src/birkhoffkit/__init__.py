"""Exact computations around genus-one Birkhoff sections of torus suspensions."""
