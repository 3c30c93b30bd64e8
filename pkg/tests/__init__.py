"""Tests for stratawave package."""
