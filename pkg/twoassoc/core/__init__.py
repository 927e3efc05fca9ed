"""Strata, flow categories and the equations of their counted operations"""
