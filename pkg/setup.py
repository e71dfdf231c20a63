#!/usr/bin/env python
# -*- coding: utf-8 -*-
from setuptools import setup

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = [
    'numpy>=1.17',
    'scipy>=1.4',
    'xarray>=0.15',
    'pandas>=1.0',
    'joblib>=0.14',
    'six',
]

test_requirements = [
    'pytest>=2.9.2',
    'mock>=2.0.0',
]

setup(
    name='gcmiss',
    version='0.1.0',
    description='Growth curve models with missing data: FIML, two-stage '
                'robust and median-based Bayesian estimation.',
    long_description=readme + '\n\n' + history,
    author="The gcmiss developers",
    packages=['gcmiss', 'gcmiss._core', 'gcmiss._components'],
    include_package_data=True,
    install_requires=requirements,
    entry_points={
        'console_scripts': ['gcm = gcmiss.cli:main'],
    },
    license="BSD license",
    zip_safe=True,
    keywords='growth curve missing data robust bayesian',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
    ],
    test_suite='tests',
    tests_require=test_requirements
)
