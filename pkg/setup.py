"""Build the optional compiled envelope; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ORIENTEER_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/orienteer/_envelope_cy.pyx"],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
