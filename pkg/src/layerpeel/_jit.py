"""JIT switch.

Set ``LAYERPEEL_DISABLE_JIT=1`` to run every kernel as plain Python/numpy.
Results are identical either way; only speed differs.
"""

import os

JIT_ENABLED = os.environ.get("LAYERPEEL_DISABLE_JIT", "0").lower() not in ("1", "true", "yes")

if JIT_ENABLED:
    from numba import njit
else:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
