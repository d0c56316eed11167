"""Learning realizers as winning strategies for 1-backtracking Tarski games."""

__version__ = "0.1.0"
