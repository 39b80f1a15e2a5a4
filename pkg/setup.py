"""Build hook for the optional compiled simplex kernel.

``pip install -e . --no-build-isolation`` compiles the Cython kernel when a
toolchain is available; otherwise the install still succeeds and the pure
Python kernel is selected at import time.  Set ``CREDALKIT_NO_EXT=1`` to skip
the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a warning instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"warning: skipping compiled kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})")


ext_modules = []
if os.environ.get("CREDALKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "credalkit.numerics._simplex_cy",
                    ["src/credalkit/numerics/_simplex_cy.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        print("warning: Cython not available; building without compiled kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
