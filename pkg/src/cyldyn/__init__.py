"""cyldyn: iteration engine for cylinder maps with exponential-periodic structure."""

__version__ = "0.1.0"
