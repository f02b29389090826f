from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "betheperm._core",
        sources=[
            "python/bindings.cpp",
            "src/arith.cpp",
            "src/binary_matrix.cpp",
            "src/integer_matrix.cpp",
            "src/permanent.cpp",
            "src/lifting.cpp",
            "src/bethe_free_energy.cpp",
            "src/pseudocodewords.cpp",
            "src/checks.cpp",
        ],
        include_dirs=["include"],
        cxx_std=20,
    )
]

setup(
    packages=["betheperm"],
    package_dir={"": "python"},
    ext_modules=ext_modules,
    cmdclass={"build_ext": build_ext},
)
