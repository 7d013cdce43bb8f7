"""Finite-field point counts, theta constants and fixed loci"""
