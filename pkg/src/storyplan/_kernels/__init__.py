"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The Cython extension is preferred when its build succeeded; set
STORYPLAN_PURE=1 to force the pure-Python implementations (used by the
benchmark and the backend-agreement tests). Both backends implement the
same three functions with identical semantics:

  score_candidates(degree_values, in_degrees, hist_counts, rept_m, omega, out)
  lcs_length(a, b)
  jaccard_best(query_ids, n_extra, token_ids, offsets, degrees)
"""

import os

from . import _pykernels

if os.environ.get("STORYPLAN_PURE"):
    _impl = _pykernels
    BACKEND = "pure-python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "pure-python"

score_candidates = _impl.score_candidates
lcs_length = _impl.lcs_length
jaccard_best = _impl.jaccard_best
