"""Utility functions and helpers."""

from .helpers import default_workers, parse_structure_counts, format_real

__all__ = ["default_workers", "parse_structure_counts", "format_real"]
