from setuptools import setup, find_packages

setup(
    name='freeprob',
    version='0.1.0',
    description='Exact and Monte Carlo free probability: partitions, cumulants, transforms, Weingarten calculus, random matrices',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    python_requires='>=3.9',
    install_requires=[
        'numpy',
        'scipy',
        'pydantic',
        'python-dotenv',
        'structlog',
        'jsonschema',
    ],
    extras_require={
        'redis': ['redis'],
        'service': ['fastapi', 'uvicorn[standard]', 'prometheus-client'],
        'test': ['pytest', 'httpx', 'fastapi', 'prometheus-client'],
    },
    entry_points={
        'console_scripts': ['freeprob=freeprob.cli:main'],
    },
)
