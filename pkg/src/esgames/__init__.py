"""Concurrent games on event structures: strategies, interaction, testing."""

__version__ = "0.1.0"
