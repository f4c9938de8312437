"""Search and certification of multifold uniform pillowcase covers."""

__version__ = "0.1.0"
