from pathlib import Path

from setuptools import find_packages, setup

version = (Path("src/almreg") / "VERSION").read_text().strip()

readme_contents = Path("README.md").read_text()

requirements = [line for line in Path("requirements.txt").read_text().split('\n') if line.strip()]
requirements_optional = [line for line in Path("requirements-optional.txt").read_text().split('\n') if line.strip()]

setup(
    name="almreg",
    version=version,
    description="Augmented Lagrangian (Bregman) iteration for linear ill-posed problems with discrepancy stopping",
    long_description=readme_contents,
    long_description_content_type="text/markdown",
    install_requires=requirements,
    extras_require={"dev": requirements_optional},
    package_dir={"": "src"},
    packages=find_packages("src", exclude=("tests",)),
    package_data={"": ["VERSION"]},
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "almreg = almreg.runner_main:main_cli",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
