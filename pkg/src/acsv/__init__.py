"""Stationary points at infinity and smooth-point asymptotics for rational generating functions."""

__version__ = "0.1.0"
