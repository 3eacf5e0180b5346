from setuptools import find_namespace_packages, setup

setup(
    name="frobenius-classifier",
    version="0.1.0",
    description="Classify real associative division algebras from structure constants",
    packages=find_namespace_packages(include=["project", "project.*"]),
    python_requires=">=3.9",
    install_requires=["numpy", "python-dotenv"],
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["frobenius=project.main:main"]},
)
