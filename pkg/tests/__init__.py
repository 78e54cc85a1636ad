"""Unit test package for trlearn."""
