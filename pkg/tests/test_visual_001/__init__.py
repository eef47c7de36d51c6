"""
VISUAL-001 Test Suite
Unit tests for SVG chart generation.
"""
