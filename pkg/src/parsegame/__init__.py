"""Playable shift-reduce dependency parsing with experiment logging and analysis."""

__version__ = "0.1.0"
