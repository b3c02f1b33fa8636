"""
Catalytic Jaynes-Cummings simulator on a truncated Fock space
"""

__version__ = "1.0.0"
__spec_version__ = "1.0"
