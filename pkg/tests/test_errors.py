"""Tests for error handling."""

import pytest

from stratawave.errors import (
    ConfigurationError,
    IncommensurateGridError,
    MeshError,
    NoBifurcationError,
    NotPositiveDefiniteError,
    ProfileError,
    SingularOperatorError,
    StratawaveError,
    format_error,
)


class TestStratawaveError:
    """Test cases for the base error."""

    def test_message_only(self):
        """Test an error without a hint."""
        error = StratawaveError("failed")
        assert str(error) == "failed"
        assert error.suggestion is None

    def test_hint(self):
        """Test that the hint is appended."""
        assert str(StratawaveError("failed", "retry")) == "failed\n\n💡 Hint: retry"


class TestSpecificErrors:
    """Test cases for the specific error classes."""

    def test_configuration_errors_listed(self):
        """Test that every configuration problem appears in the hint."""
        error = ConfigurationError("Invalid configuration", ["grid.Nx: bad", "flow.d: bad"])
        assert error.errors == ["grid.Nx: bad", "flow.d: bad"]
        assert "  - grid.Nx: bad" in str(error)
        assert ConfigurationError("plain").errors == []

    def test_value_error_subclasses(self):
        """Test that input errors are also ValueErrors."""
        for error in (ProfileError("x"), MeshError("x"), IncommensurateGridError(13, 3)):
            assert isinstance(error, ValueError)
            assert isinstance(error, StratawaveError)

    def test_attributes(self):
        """Test the diagnostic attributes."""
        assert NotPositiveDefiniteError(2).pivot == 2
        error = SingularOperatorError(1e-9, 1e-6)
        assert error.min_abs_mu == 1e-9
        assert "condition estimate 1.000e+09" in str(error)
        assert NoBifurcationError((0.0, 1.0)).bracket == (0.0, 1.0)

    def test_raised(self):
        """Test that errors are raised and caught as StratawaveError."""
        with pytest.raises(StratawaveError, match="No bifurcation wavenumber in"):
            raise NoBifurcationError((0.001, 1.0))


class TestFormatError:
    """Test cases for format_error."""

    def test_package_error(self):
        """Test that package errors keep their hint."""
        assert format_error(MeshError("bad mesh")).startswith("bad mesh\n\n💡 Hint:")

    def test_file_not_found(self):
        """Test the missing-file message."""
        error = FileNotFoundError(2, "No such file", "run.json")
        assert format_error(error).startswith("File not found: run.json")

    def test_value_error(self):
        """Test the invalid-value message."""
        assert format_error(ValueError("k must be positive")).startswith(
            "Invalid value: k must be positive"
        )

    def test_memory_error(self):
        """Test the out-of-memory message."""
        assert format_error(MemoryError()).startswith("Out of memory")

    def test_unexpected(self):
        """Test other exceptions."""
        assert format_error(KeyError("x")) == "Unexpected error: KeyError: 'x'"
