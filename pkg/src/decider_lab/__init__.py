"""Executable checks for two classic Turing-machine deciders."""

__version__ = "0.1.0"
