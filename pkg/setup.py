"""Build the optional compiled kernel.

Project metadata lives in pyproject.toml; this file only wires up the
Cython extension.  The package works without it (a pure-Python kernel is
selected at import time), so a missing compiler or Cython downgrades the
build instead of failing it.  Set UFEXPLAIN_PURE=1 to skip the extension
outright, or build it in place with:

    python setup.py build_ext --inplace
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # compiler missing or broken
            print(
                f"warning: building {ext.name} failed ({exc}); "
                "falling back to the pure-Python kernel",
                file=sys.stderr,
            )


ext_modules = []
cmdclass = {}
if os.environ.get("UFEXPLAIN_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ufexplain._speedups", ["src/ufexplain/_speedups.pyx"])],
            language_level="3",
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        print(
            "warning: Cython not available; using the pure-Python kernel",
            file=sys.stderr,
        )

setup(ext_modules=ext_modules, cmdclass=cmdclass)
