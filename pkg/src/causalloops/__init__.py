"""Causal loop nets on Minkowski space-time.

Subpackages:
  geometry   - Minkowski vectors, Lorentz/Poincare groups, double cones
  simplex    - affine smearing simplices, chains, cone construction, forms
  loopgroup  - words, free reduction, paths/loops, path frames
  holonomy   - unitary cochains, loop representations, connections, gauges
  emfield    - classical closed 2-form models, potentials, the em cochain
  checks     - registered verification checks and scenario configs
  cli        - batch verification runner
"""

__version__ = "0.1.0"
