"""Build script: compiles the residue-enumeration kernel when Cython and a C
compiler are available.  The package works without it (a pure-Python kernel
is selected at import time), so extension build failures are non-fatal.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            print(f"warning: extension build skipped ({exc}); "
                  "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernel")


try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension("obstructor._fastenum", ["src/obstructor/_fastenum.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
