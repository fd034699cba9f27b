"""Corpus construction, counting functions, CSV persistence and configuration."""
