"""Exact counts of automorphic forms on the norm-one torus of an imaginary
quadratic field, ordered by analytic conductor."""

from normtorus.field import FieldContext, Splitting, new_field

__version__ = "0.1.0"

__all__ = ["FieldContext", "Splitting", "new_field", "__version__"]
