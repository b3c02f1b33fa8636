"""
Experiment surface of the simulator
"""

# This file makes the api directory a Python package
