"""
mtpack - vertex-disjoint cycle packings in multipartite tournaments
"""

from .cli import cli_dispatch, main

__all__ = ["cli_dispatch", "main"]
