"""Build script: compiles the optional exponent-kernel extension.

The package works without the extension (pure-Python fallback in
plocus._exponents_py); a failed compile therefore only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("plocus._exponents", ["src/plocus/_exponents.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    import sys

    print(f"plocus: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
