"""Package-wide numeric options.

Options are read at call time, so callers (and tests) may override a key and
restore it afterwards. Keys:

rel_tol         default relative tolerance for equality assertions
size_cap        largest dense dimension any builder will materialize
jacobi_max_dim  matrices up to this dimension use the one-sided Jacobi SVD;
                larger ones fall back to the LAPACK driver
"""

DEFAULTS = {
    "rel_tol": 1e-10,
    "size_cap": 2000,
    "jacobi_max_dim": 64,
}

_options = dict(DEFAULTS)


def get_option(key):
    try:
        return _options[key]
    except KeyError:
        raise KeyError(f"unknown option {key!r}; known: {sorted(DEFAULTS)}") from None


def set_option(key, value):
    if key not in DEFAULTS:
        raise KeyError(f"unknown option {key!r}; known: {sorted(DEFAULTS)}")
    _options[key] = value


def reset_options():
    _options.clear()
    _options.update(DEFAULTS)
