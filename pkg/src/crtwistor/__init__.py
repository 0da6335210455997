"""Exact verification toolkit for self-dual Einstein metrics with CR infinity."""
__version__ = "0.1.0"
