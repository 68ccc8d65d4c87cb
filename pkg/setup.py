from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="relbackflow",
    version="1.0.0",
    author="relbackflow developers",
    description="Maximal quantum backflow for a relativistic electron: eigenvalues, currents and trial fits",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["relbackflow", "relbackflow.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    license="MIT",
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.20.0",
        "scipy>=1.7.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0.0",
            "hypothesis>=6.0.0",
            "black>=21.5b2",
            "mypy>=0.812",
            "isort>=5.9.1",
            "mkdocs>=1.4.0",
            "mkdocs-material>=8.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "relbackflow=relbackflow.cli:main",
        ],
    },
)
