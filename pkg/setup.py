#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
foalkit Setup Script

Occlusion-aware mixing, appearance losses and feedback scheduling for
thermal-to-color image translation.
"""

from setuptools import setup, find_packages

setup(
    name="foalkit",
    version="0.1.0",
    description="Occlusion-aware mixing, appearance losses and feedback scheduling "
                "for thermal-to-color image translation",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["foalkit", "foalkit.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy>=1.7",
        "scikit-image>=0.19",
        "Pillow>=9.0",
        "PyYAML>=5.4",
    ],
    extras_require={
        "dev": ["pytest>=7.0", "pytest-cov>=4.0"],
    },
    entry_points={
        "console_scripts": [
            "foalkit=foalkit.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Image Processing",
    ],
    keywords=["thermal", "infrared", "image-translation", "data-augmentation", "segmentation"],
    license="MIT",
)
