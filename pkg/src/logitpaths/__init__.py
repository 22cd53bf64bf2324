"""Transition costs and value functions for coordination games under logit choice.

Core objects: simplex lattice grids (`geometry`), payoff machinery (`game`),
the two Hamiltonian families and their per-direction support costs
(`hamiltonian`), multi-source shortest-path value functions (`solver`),
exact two-action formulas (`closedform`), scripted verification experiments
(`experiments`), and an agent-based simulator (`mcsim`).  The `service`
subpackage wraps everything in a FastAPI app; `cli` is a thin client.
"""

__version__ = "0.1.0"
