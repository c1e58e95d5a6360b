"""
Ringline - Finite Ring Geometry Workbench
Projective lines over finite rings, chain geometries and divisible designs
"""

__version__ = "1.0.0"
