"""Functional graphs and their topological certificates."""
