"""Exact verification toolkit for semidualizing modules over graded quotient
rings: Groebner engine, finitely presented graded modules, homological
invariants, and the depth-identity verification pipeline."""

__version__ = "0.1.0"
