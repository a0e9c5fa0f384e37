"""Massey products <y, x, ..., x, y> and nilpotent lifting obstructions over Z/m."""

__version__ = "0.1.0"
