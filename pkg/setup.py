
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

from setuptools import setup, find_packages
from metapac import __version__

setup(
    name="metapac",
    description="fast/slow decision system switching in a seeded pursuit game",
    version=__version__,
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    package_data={
        'metapac': ['layouts/*.lay'],
    },
    entry_points={
        'console_scripts': [
            'metapac = metapac.cli:main',
        ]
    },
    requires=["numpy", "scipy", "deriva"],
    install_requires=["numpy>=1.17", "scipy>=1.3", "deriva>=1.0"],
    extras_require={
        'tests': ["pytest", "hypothesis"],
    },
    python_requires=">=3.8",
    license='(new) BSD',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Intended Audience :: Developers',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'License :: OSI Approved :: BSD License',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
    ])
