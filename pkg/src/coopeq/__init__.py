"""CoopEq - cooperative equilibrium solver for two-player normal-form games."""

__version__ = "1.0.0"
