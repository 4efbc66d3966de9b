"""Exact incidence geometry and finite-field projection laboratory."""
