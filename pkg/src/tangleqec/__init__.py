"""tangleqec: tangled syndrome-extraction circuits for planar codes."""

__version__ = "0.1.0"
