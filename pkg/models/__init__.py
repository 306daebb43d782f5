"""
Graphic model module.
Contains the graphic data types (models.graphic), the error hierarchy
(models.errors) and the example catalog (models.catalog).
"""
