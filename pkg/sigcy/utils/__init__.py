"""Utility modules for sigcy"""
