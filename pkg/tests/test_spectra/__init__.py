"""Tests for spectra module."""
