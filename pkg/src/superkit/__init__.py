"""Exact symbolic computation for superspace: Grassmann/Berezin calculus, super
vector fields, supermatrices, Clifford algebras and superfield actions."""

__version__ = "0.1.0"
