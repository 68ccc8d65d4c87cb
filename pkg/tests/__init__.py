"""
Test package for relbackflow.
"""
