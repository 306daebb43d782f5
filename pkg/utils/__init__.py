"""
Utility functions and helpers: polynomial roots (utils.roots) and graphic
file I/O (utils.graphic_loader).
"""
