"""Support-guessing decoders and complexity bounds for sum-rank-metric codes."""

__version__ = "0.1.0"
