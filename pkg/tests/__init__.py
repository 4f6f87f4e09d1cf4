"""Test suite package for warpiso."""
