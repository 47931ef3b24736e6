"""Finite W-semigroup relation calculus."""
