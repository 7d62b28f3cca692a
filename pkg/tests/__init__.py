"""Tests for carc."""
