"""Build script: compiles the optional summation-kernel extension.

The package is fully functional without the extension (a pure-Python
fallback with identical arithmetic is selected at import time); set
SINGTRACE_PURE=1 to skip compilation explicitly.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"warning: extension build skipped ({exc}); "
                  "using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "using pure-Python kernels")


ext_modules = []
if os.environ.get("SINGTRACE_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "singtrace._kernels",
                    ["src/singtrace/_kernels.pyx"],
                    # -ffp-contract=off keeps the compiled kernels
                    # bit-identical to the pure-Python fallback (no FMA
                    # fusion of the compensated-summation steps).
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
