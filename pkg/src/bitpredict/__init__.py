"""Bit-sequence prediction toolkit.

Subpackages cover the full pipeline: bitstream corpora and statistics,
a dense statevector simulator, quantum-state encodings of bit history,
variational circuit construction and training, classical baseline
predictors, a staggered-window evaluation harness, and an interactive
commit-reveal guessing game service.
"""

__version__ = "0.1.0"
