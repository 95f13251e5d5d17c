"""Shortest cevian pairs through two fixed points, and the classical Philo line."""

__version__ = "0.1.0"
