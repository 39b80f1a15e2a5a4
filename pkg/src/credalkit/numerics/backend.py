"""Kernel selection: compiled extension if importable, else pure Python.

Set ``CREDALKIT_PURE_PYTHON=1`` before import to force the reference backend.
Both kernels implement the same ``solve_standard(a, b, c, max_iter)``
contract and the same pivoting rules, so they are interchangeable.
"""

import os

from . import _simplex_py

_KERNELS = {"python": _simplex_py}

if os.environ.get("CREDALKIT_PURE_PYTHON") != "1":
    try:
        from . import _simplex_cy

        _KERNELS["cython"] = _simplex_cy
    except ImportError:
        pass

_ACTIVE = "cython" if "cython" in _KERNELS else "python"


def backend_name():
    """Name of the kernel used by default ('cython' or 'python')."""
    return _ACTIVE


def available_backends():
    return tuple(sorted(_KERNELS))


def get_kernel(name=None):
    """Return a kernel module by name; default is the active backend."""
    if name is None:
        name = _ACTIVE
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None
