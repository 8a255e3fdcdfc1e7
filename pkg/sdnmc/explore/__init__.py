"""Exploration backends."""
