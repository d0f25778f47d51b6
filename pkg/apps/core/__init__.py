"""Tolerances, logging helpers and base models shared by the KP Verify apps."""
