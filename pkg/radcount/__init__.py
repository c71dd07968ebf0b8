"""Exact counting of commuting pairs in radicals of quiver endomorphism algebras."""

__version__ = "0.1.0"
