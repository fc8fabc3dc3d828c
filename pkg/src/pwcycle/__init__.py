"""Piecewise-smooth planar systems: closing equations and numerical verification."""
