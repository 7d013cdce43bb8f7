"""Euler-number ledgers and the Hodge/Picard assembly"""
