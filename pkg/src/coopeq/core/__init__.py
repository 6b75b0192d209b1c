"""Core logic for CoopEq."""
