"""Build script for the optional compiled audit kernel.

The package is fully functional without the extension: logtrust.kernel
falls back to the pure-Python scan when the compiled module is missing.
Build failures (no compiler, no Cython) therefore only emit a warning.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to the pure-Python kernel on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled kernel, using pure-Python fallback: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"failed to build {ext.name}, using pure-Python fallback: {exc}")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/logtrust/_kernel.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
