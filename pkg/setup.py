"""Build script for the compiled convolution kernel.

The extension is optional: the package falls back to the pure-Python
kernel when the .so is absent, so a failed build only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("syzmirror._kernel", ["src/syzmirror/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
