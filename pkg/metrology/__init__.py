"""
Random-generator phase metrology workbench.
"""
