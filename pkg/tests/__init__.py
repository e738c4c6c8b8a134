"""Tests for the dynamic transfer experiment runner."""
