"""Test suite for the project."""
