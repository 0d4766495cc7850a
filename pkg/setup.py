"""Build script for the optional compiled normal-form backend.

The package is fully functional without the extension; if Cython or a C
compiler is unavailable (or KMW_SKIP_EXT is set) the build proceeds and
the library selects its pure-Python kernels at import time.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat any extension build failure as a soft fallback, not an error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: skipping compiled backend ({exc}); pure-Python kernels will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); pure-Python kernels will be used")


ext_modules = []
if not os.environ.get("KMW_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(["src/kmw/_snf_core.pyx"], language_level="3")
    except ImportError:
        print("warning: Cython not available; pure-Python kernels will be used")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
