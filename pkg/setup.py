from setuptools import find_packages, setup

setup(
    name='freeassoc-networks-python',
    version='0.1.0',
    description='Free association norms, semantic networks and spreading activation experiments',
    packages=find_packages(exclude=['tests']),
    package_data={'freeassoc.experiments': ['data/*.csv', 'data/*.json']},
    python_requires='>=3.9',
    install_requires=[
        "numpy~=1.26.4",
        "openai~=1.30.1",
        "pandas~=2.2.2",
        "pytest~=8.1.1",
        "scipy~=1.13.0",
        "tenacity~=8.3.0",
    ],
    extras_require={
        "export": ["nltk~=3.8.1"],
        "test": ["networkx~=3.3"],
    },
    entry_points={
        "console_scripts": ["freeassoc=freeassoc.cli:main"],
    }
)
