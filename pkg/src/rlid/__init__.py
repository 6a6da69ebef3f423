"""rlid: language identification for romanized (transliterated) text."""

__version__ = "0.1.0"
