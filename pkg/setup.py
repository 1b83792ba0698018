from setuptools import setup, find_packages

setup(
    name="phasebench",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "numpy",
        "scipy",
        "pydantic>=2",
        "python-dotenv",
        "rich"
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["phasebench=metrology.cli:main"]},
)
