"""Simulation toolkit for quantum advice and one-way communication.

Modules:

* ``qcore``: density matrices, two-outcome instruments, measure-and-recover;
* ``groups``: finite groups, subgroups, cosets, subset instances;
* ``protocols``: one-way problems, quantum and fingerprint protocols;
* ``reconstruct``: classical simulation of a quantum message by postselection;
* ``lowerbounds``: exact distributions and the trace-distance certificate;
* ``polymethod``: exact polynomials, Markov bounds, query algorithms;
* ``experiments`` / ``cli``: reproducible reports.
"""

from .serialize import ARTIFACT_VERSION as __version__

__all__ = ["__version__"]
