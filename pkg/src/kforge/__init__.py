"""kforge: exact K-theory computations for graph C*-algebras.

The package computes K-groups of graph algebras from vertex matrices, runs
six-term exact sequence diagnostics for gauge-invariant ideals, splices
graphs together along prescribed K-theory data, and realizes six-term
targets as graphs. All arithmetic is exact integer arithmetic.
"""

__version__ = "0.1.0"
