"""
Setup tmspy package.
"""

if __name__ == '__main__':  # pragma: no cover
    from pathlib import Path
    from re import search, M
    from setuptools import setup, find_packages

    ROOT = Path(__file__).parent

    def get_version(filename="tmspy/__init__.py"):
        match = search(r"^__version__ = ['\"]([^'\"]*)['\"]",
                       (ROOT / filename).read_text(), M)
        if match is None:
            raise RuntimeError("No version string in {}.".format(filename))
        return match.group(1)

    def get_reqs(filename, required=False):
        path = ROOT / filename
        if not path.exists() and not required:
            from warnings import warn
            warn("{} not found".format(filename))
            return []
        lines = (line.strip() for line in path.read_text().splitlines())
        return [line for line in lines if line and not line.startswith('#')]

    TEST_REQS = get_reqs("test/requirements.txt")
    DOCS_REQS = get_reqs("docs/requirements.txt")

    setup(name='tmspy',
          version=get_version(),
          packages=find_packages(include=['tmspy', 'tmspy.*']),
          description='Finite-time dephasing of two-mode squeezed '
                      'microwave states',
          long_description=(ROOT / "README.md").read_text(),
          long_description_content_type="text/markdown",
          install_requires=get_reqs("requirements.txt", required=True),
          extras_require={'test': TEST_REQS, 'docs': DOCS_REQS},
          entry_points={'console_scripts': ['tmspy=tmspy.cli:main']},
          classifiers=[
              'Programming Language :: Python :: 3',
              'Topic :: Scientific/Engineering :: Physics',
          ],
          python_requires='>=3.9',
          )
