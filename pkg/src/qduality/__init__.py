"""Exact symbolic engine for Drinfeld's functors on truncated QUEAs and QFSHAs."""
__version__ = "0.1.0"
