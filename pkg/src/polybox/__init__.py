"""Polybox codes: covers, isomorphism, Keller graphs, rigidity and tilings."""

__version__ = "0.1.0"
