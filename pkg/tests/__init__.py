"""Test suite for KP Verify."""
