"""Tests for flow module."""
