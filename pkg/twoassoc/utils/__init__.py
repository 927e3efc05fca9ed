"""Helpers for rational text forms and graph export"""
