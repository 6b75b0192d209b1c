"""Command-line surface for CoopEq."""
