import re
from pathlib import Path

from setuptools import find_packages, setup

PKG_NAME = "picolsd"


def read_version():
    text = (Path(__file__).parent / PKG_NAME / "_version.py").read_text()
    return re.search(r'__version__ = "([^"]+)"', text).group(1)


setup(
    name=PKG_NAME,
    version=read_version(),
    description="Lewenstein-Sanpera decompositions of two-qubit states.",
    license="MIT",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "click>=7.0",
        "tqdm",
        "coloredlogs",
        "numpy>=1.17",
    ],
    extras_require={"test": ["pytest", "hypothesis"]},
    python_requires=">=3.8",
    entry_points={"console_scripts": ["picolsd = picolsd:main"]},
)
