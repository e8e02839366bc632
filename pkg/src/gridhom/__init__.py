"""Double-point enhanced grid homology and the enhanced GRID invariants."""

__version__ = "0.1.0"
