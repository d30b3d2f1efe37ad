"""Exact simulation and auditing of two controlled quantum secure direct
communication protocols (cluster state, and (2,3)-threshold Brown state)."""

__version__ = "0.1.0"
