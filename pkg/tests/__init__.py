"""
Test package for the quench dynamics toolkit.
"""
