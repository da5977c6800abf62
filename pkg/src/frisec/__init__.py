"""Secrecy-rate simulation toolkit for fluid reconfigurable intelligent surfaces."""

__version__ = "0.1.0"
