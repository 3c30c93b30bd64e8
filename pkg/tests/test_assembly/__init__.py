"""Tests for assembly module."""
