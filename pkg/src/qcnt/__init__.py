"""Number theory of quasicrystalline point sets in real quadratic fields.

Exact quadratic-field arithmetic, cut-and-project enumeration, zeta and
theta functions with numerical continuation, modular-type invariants and
infinite-product trigonometry over model sets.
"""

__version__ = "0.1.0"
