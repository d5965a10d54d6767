"""Quantum side of the lab: statevector simulator, Simon's algorithm, embedding, and observable."""
