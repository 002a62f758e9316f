import shutil
import subprocess
import sys
from glob import glob
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    """Drive the repository's CMake build for the _core extension only."""

    def build_extension(self, ext):
        import pybind11

        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DEGEDYN_BUILD_TESTS=OFF",
            "-DEGEDYN_BUILD_CLI=OFF",
            f"-DPython3_EXECUTABLE={sys.executable}",
            # Pin the headers to the package this interpreter imports; a
            # system-wide pybind11 may be too old for the installed numpy.
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(["cmake", "--build", str(build_dir), "--target", "_core"], check=True)

        built = glob(str(build_dir / "python" / "egedyn" / "_core*"))
        built = [p for p in built if p.endswith((".so", ".pyd", ".dylib"))]
        if not built:
            raise RuntimeError("cmake did not produce the _core extension")
        destination = Path(self.get_ext_fullpath(ext.name))
        destination.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], destination)


setup(
    ext_modules=[CMakeExtension("egedyn._core")],
    cmdclass={"build_ext": CMakeBuild},
)
