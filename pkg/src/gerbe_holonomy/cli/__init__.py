"""
CLI module for gerbe-holonomy.

This package contains the command-line interface: commands, shared
options, report rendering and configuration management.
"""

__all__ = []
