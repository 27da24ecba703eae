from setuptools import find_packages, setup

setup(
    name="infoplan",
    version="0.1.0",
    author="Hafiz Shakeel Ahmad",
    author_email="hafizshakeel1997@gmail.com",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "pillow>=9.5.0",
        "matplotlib>=3.7",
    ],
    entry_points={"console_scripts": ["infoplan=cli.main:main"]},
)
