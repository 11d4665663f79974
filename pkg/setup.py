from setuptools import setup, find_packages

setup(
    name="reebstrip",
    version="0.1.0",
    author="Sourav",
    author_email="bhardwajsourav113@gmail.com",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"": ["*.yaml"]},
    entry_points={"console_scripts": ["reebstrip=src.pipline.cli:main"]},
)
