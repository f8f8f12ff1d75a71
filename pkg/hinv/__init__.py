"""Hyperinvariant subspace lattices of nilpotent matrices, as hypertuple lattices V(α)."""

__version__ = "1.0.0"
