from setuptools import setup, find_packages

version = '0.1.0'

setup(name='degest',
      version=version,
      description="Sublinear-time average-degree estimation under arboricity bounds",
      long_description=open("README.md", "r").read(),
      classifiers=[
          "Development Status :: 3 - Alpha",
          "Environment :: Console",
          "Intended Audience :: Science/Research",
          "Natural Language :: English",
          "Operating System :: OS Independent",
          "Programming Language :: Python",
          "Programming Language :: Python :: 3",
          "Topic :: Scientific/Engineering :: Mathematics",
          "License :: OSI Approved :: MIT License",
          ],
      keywords='graph sublinear average degree arboricity sampling',
      author='Garrett Pennington',
      author_email='garrettp@gmail.com',
      url='http://github.com/gpennington/degest',
      license='MIT',
      packages=find_packages(exclude=['examples', 'examples.*']),
      install_requires=['numpy>=1.17', 'scipy>=1.7', 'networkx>=2.4'],
      entry_points={
          'console_scripts': ['degest=degest.cli:main'],
      },
      include_package_data=True,
      zip_safe=True,
      )
