# covering-lab/setup.py
from setuptools import setup, find_packages

setup(
    name='covering-lab',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=[
        'pydantic==2.11.7',
        'sentry_sdk==2.34.1',
        'python-decouple==3.8',
        'numpy==2.2.6',
        'scipy==1.15.3',
    ],
    extras_require={
        'test': ['pytest==8.3.5'],
    },
    entry_points={
        'console_scripts': [
            'covering-lab=covering_lab.commands.experiment:main',  # maps 'covering-lab <command>' to the experiment runner
        ],
    },
    include_package_data=True,
    zip_safe=False,
    description='Dimension predictor and Monte-Carlo simulator for random covering sets on the torus',
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
)
