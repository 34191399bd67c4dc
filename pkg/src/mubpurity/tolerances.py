"""Shared numerical tolerances.

Three buckets, used consistently by the library and its tests:

* ``TOL_STRUCTURAL`` -- exact algebraic identities checked entrywise
  (hermiticity, unit trace, orthonormality, unbiasedness).
* ``TOL_PSD`` -- slack on positive-semidefiniteness and on hermiticity of
  eigensolver inputs.
* ``TOL_SPECTRAL`` -- accumulated-error bound for spectral sums, projector
  ranks and relation gaps.

``TOL_NULLSPACE`` is the pivot threshold of the Gram-Schmidt null-space
sweep: a candidate whose residual norm falls below it is considered inside
the span.
"""

TOL_STRUCTURAL = 1e-12
TOL_PSD = 1e-10
TOL_SPECTRAL = 1e-9
TOL_NULLSPACE = 1e-8
