"""Hot kernels with a compiled backend and a pure-Python fallback.

The Cython extension is used when it has been built; setting the environment
variable ``JIGSAWPERC_PURE=1`` forces the fallback.  Both modules expose the
same functions: ``jigsaw_run``, ``config_profile`` and ``tree_pair_sweep``.
"""

import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("JIGSAWPERC_PURE"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else pure
BACKEND = active.BACKEND

jigsaw_run = active.jigsaw_run
config_profile = active.config_profile
tree_pair_sweep = active.tree_pair_sweep

# Largest vertex count the bitmask enumeration supports.
MAX_ENUM_VERTICES = 7
