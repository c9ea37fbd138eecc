"""Credit reasoning over non-financial evidence: single-pass analysis and a ten-step structured debate."""

__version__ = "0.1.0"
