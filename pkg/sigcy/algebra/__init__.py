"""Exact fields, linear algebra and sparse polynomials"""
