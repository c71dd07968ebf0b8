"""Test suite for radcount."""
