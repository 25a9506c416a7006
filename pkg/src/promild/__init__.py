"""Certify mildness of finitely presented pro-p groups from Magnus coefficients."""

__version__ = "0.1.0"
