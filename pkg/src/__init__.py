"""
Manakov Lab - Main Package
Numerical verification of Manakov-type flows and their integrals on so(n)
"""

__version__ = "1.0.0"
__license__ = "MIT"
