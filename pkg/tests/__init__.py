"""
Test suite for the valuations-at-infinity toolkit.
"""
