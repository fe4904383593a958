from setuptools import setup


def get_version_number():
    for l in open('finslerfield/__init__.py', 'r').readlines():
        if not(l.find('__version__')):
            exec(l, globals())
            return __version__


setup(name='finslerfield',
      version=get_version_number(),
      description='indicatrix volume lagrangians and field equations of conformally flat Finsler spaces',
      packages=['finslerfield',
                'finslerfield.analysis',
                'finslerfield.core',
                'finslerfield.system',
                'finslerfield.tests',
                'finslerfield.utils'],
      install_requires=['numpy', 'scipy', 'h5py'],
      extras_require={'test': ['sympy']},
      entry_points={'console_scripts': ['finslerfield=finslerfield.cli:main']},
      test_suite='finslerfield.tests',
      license='MIT License')
