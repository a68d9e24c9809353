#!/usr/bin/env python3

############################################################################
# bohmvar: numerical laboratory of Bohmian variance decomposition
# Released under the GNU General Public License
############################################################################

try:
    from setuptools import setup, find_packages
except ImportError:
    from ez_setup import use_setuptools
    use_setuptools()
    from setuptools import setup, find_packages


import sys


NAME = 'bohmvar'

MIN_PYTHON_VERSION = (3, 7)


# Check python version
if sys.version_info[:2] < MIN_PYTHON_VERSION:
    sys.stderr.write("Python version " + sys.version.split()[0] +
                     " is not supported!\nSupported versions are " +
                     ".".join(map(str, MIN_PYTHON_VERSION)) + " and newer\n")
    sys.stderr.flush()
    sys.exit(1)


# Load up the description from README.md
with open('README.md') as f:
    DESCRIPTION = f.read()

requirements = ['numpy', 'scipy', 'ruamel.yaml']

setup(
    name=NAME,
    description='Variance decomposition of observables into Bohmian '
                'ensemble variance and quantum fluctuation term',
    long_description=DESCRIPTION,
    long_description_content_type='text/markdown',
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License (GPL)',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    packages=find_packages(exclude=['examples', 'tests']),
    include_package_data=True,
    install_requires=requirements,
    entry_points={
            'console_scripts': ['bohmvar = bohmvar.core:main']
    },
    setup_requires=["setuptools_scm"],
    use_scm_version={"write_to": "bohmvar/version.py",
                     "local_scheme": "no-local-version"},
)
