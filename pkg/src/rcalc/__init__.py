"""Specification revision by R-calculus: a budgeted first-order prover,
premise tracking, revision transitions and a maximal-contraction oracle."""

__version__ = "0.1.0"
