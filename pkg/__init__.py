"""
Stable-Map Graphic Analysis Engine

Rotation sweeps over planar graphics of stable maps, genus trajectories of
the induced Heegaard splittings, and common stabilization bounds.
"""

__version__ = "1.0.0"
