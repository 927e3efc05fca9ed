"""Command-line front end"""
from .commands import run

__all__ = [
    'run'
]
