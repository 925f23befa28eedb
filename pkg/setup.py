"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: `rotquad._kernels`
falls back to the pure NumPy implementation when `_core` is not importable.
Build in place with

    python setup.py build_ext --inplace

The C source is committed, so Cython is only needed after editing _core.pyx.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install over a missing/broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            print(f"warning: compiled kernels skipped ({exc}); using pure backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: {ext.name} skipped ({exc}); using pure backend")


def kernel_sources():
    pyx = os.path.join("src", "rotquad", "_kernels", "_core.pyx")
    c = os.path.join("src", "rotquad", "_kernels", "_core.c")
    use_cython = False
    if os.path.exists(pyx):
        if not os.path.exists(c) or os.path.getmtime(pyx) > os.path.getmtime(c):
            try:
                import Cython.Build  # noqa: F401

                use_cython = True
            except ImportError:
                pass
    return pyx if use_cython else c, use_cython


def main():
    src, use_cython = kernel_sources()
    ext = Extension(
        "rotquad._kernels._core",
        sources=[src],
        extra_compile_args=["-O3"],
    )
    exts = [ext]
    if use_cython:
        from Cython.Build import cythonize

        exts = cythonize(exts, language_level=3)
    setup(ext_modules=exts, cmdclass={"build_ext": OptionalBuildExt})


if __name__ == "__main__":
    main()
