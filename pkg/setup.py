from setuptools import setup, find_packages
import os

# Runtime dependencies; pytest is only needed for the test suite
install_requires = [
    "numpy>=1.21",
    "scipy>=1.7",
    "pandas>=1.3",
    "joblib>=1.1",
    "python-dateutil>=2.8.0",
]

# Version
version = "1.0.0"

setup(
    name="limited_attention",
    version=version,
    description="Monotonic random attention: choice synthesis, revealed preference, constraint matrices and moment-inequality inference",
    long_description=open("README.md").read() if os.path.exists("README.md") else "",
    long_description_content_type="text/markdown",
    author="Limited Attention Developers",
    packages=find_packages(exclude=["examples", "examples.*"]),
    zip_safe=False,
    include_package_data=True,
    package_data={"limited_attention": ["doctype/*/*.json"]},
    install_requires=install_requires,
    extras_require={"test": ["pytest>=7.0"]},
    entry_points={"console_scripts": ["limited-attention=limited_attention.commands:main"]},
    python_requires=">=3.8",
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
