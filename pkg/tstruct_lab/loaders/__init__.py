"""
Loaders for JSON documents.
"""

from .json_loader import DocumentLoader

__all__ = ["DocumentLoader"]
