"""Exact modular data for centers of Tambara-Yamagami categories."""
