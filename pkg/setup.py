import sys
from setuptools import setup

# from mpld3
def get_version(path):
    """Get the version info from the package without importing it"""
    import ast

    with open(path) as init_file:
        module = ast.parse(init_file.read())

    version = (ast.literal_eval(node.value) for node in ast.walk(module)
               if isinstance(node, ast.Assign)
               and node.targets[0].id == "__version__")
    try:
        return next(version)
    except StopIteration:
        raise ValueError("version could not be located")

install_requires = [l.strip() for l in open('requirements.txt')
                    if l.strip() and not l.startswith('#')]
if sys.version_info[:2] < (3, 8):
    sys.exit("depbounds needs python >= 3.8")

setup(name='depbounds',
      version=get_version("depbounds/__init__.py"),
      description="fractional invariants, correlation bounds and exact oracles "
                  "for dependency graphs and hypergraphs",
      packages=['depbounds'],
      install_requires=install_requires,
      extras_require={'test': ['pytest', 'hypothesis']},
      long_description=open('README.md').read(),
      long_description_content_type='text/markdown',
      classifiers=[
      'Topic :: Scientific/Engineering :: Mathematics',
      'Programming Language :: Python :: 3'
      ],
      entry_points={'console_scripts': ['depbounds = depbounds.cli:main']},
      scripts=['scripts/tabulate-crossover.py']
)
