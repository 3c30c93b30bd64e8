"""Tests for linearize module."""
