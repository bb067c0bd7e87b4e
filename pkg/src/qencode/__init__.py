"""State-vector simulation of collective-pulse logical qubit encoding."""

__version__ = "0.1.0"
