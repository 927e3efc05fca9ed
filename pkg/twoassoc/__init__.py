"""Desk-scale 2-associahedra, flow categories and (A-infinity, 2) equation checks"""
from .config import APP_VERSION

__version__ = APP_VERSION
