"""Strong Chow groups of torus quotient stacks and their good moduli spaces."""

__version__ = "0.1.0"
