from setuptools import setup

setup(
    name='FisherGME',
    version='0.1',
    packages=['fishergme'],
    url='',
    license='',
    description='Quantum Fisher information criteria for genuine tripartite entanglement',
    install_requires=['numpy', 'scipy', 'tabulate'],
    entry_points={'console_scripts': ['fishergme=fishergme.cli:main']},
)
