"""
sigcy - exact and numerical verification toolkit for a Siegel modular
Calabi-Yau threefold, its (Z/2)^5 quotient and the bi-double cover model
"""
__version__ = "0.1.0"

# Bump whenever a counting kernel changes; cached counts are keyed on it.
CODE_VERSION = "counts-1"
