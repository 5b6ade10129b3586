"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension, ``multiband._speedups``,
holding the two inner loops that dominate runtime (the dense simplex pivot
loop and the candidate-vector sweep of the robust binary solver).  The
extension is a strict accelerator: if Cython or a C compiler is unavailable
the build degrades to the pure-Python kernels in ``multiband._kernels_py``
and everything still works, just slower.
"""

from __future__ import annotations

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible; never fail the install over it."""

    def run(self):  # noqa: D102
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping compiled kernels ({exc}); "
                  f"falling back to pure-Python kernels")

    def build_extension(self, ext):  # noqa: D102
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: could not compile {ext.name} ({exc}); "
                  f"falling back to pure-Python kernels")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - toolchain dependent
        return []
    ext = Extension(
        "multiband._speedups",
        ["src/multiband/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
