"""Build script for the optional compiled integration kernels.

The package works without the extension: srswitch._kernels falls back to a
pure numpy implementation when the compiled module is absent, so a failed
build only costs speed, never correctness.
"""
import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "srswitch._kernels._core",
        sources=["src/srswitch/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


try:
    setup(ext_modules=extensions())
except SystemExit:
    raise
except Exception as exc:  # compiler missing, etc.
    print(f"warning: compiled kernels skipped ({exc}); installing pure-python build",
          file=sys.stderr)
    setup(ext_modules=[])
