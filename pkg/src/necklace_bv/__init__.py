"""Exact-arithmetic engine for necklace Lie bialgebras, BV structures and fat-graph complexes."""

__version__ = "0.1.0"
