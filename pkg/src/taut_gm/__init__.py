"""Exact verification engine for the tautological ring of Gushel-Mukai sixfolds."""

__version__ = "0.1.0"
