
from setuptools import setup, find_packages

# Call the setup function with the minium named arguments
setup(
    # the name of the library (will be listed with pip list)
    name="contextlab",
    version="0.1.0",
    # the find_packages function will return a list of packages in src
    packages=find_packages('src'),
    # The empty key stands for the root package
    # See https://docs.python.org/3/distutils/setupscript.html#listing-whole-packages
    package_dir={'': 'src'},
    # example graphs are loaded with importlib.resources
    package_data={'contextlab.data': ['*.json', '*.txt']},
    python_requires='>=3.9',
    install_requires=[
        'numpy',
        'scipy>=1.9',
        'networkx>=3.1',
        'python-dotenv',
    ],
    entry_points={
        'console_scripts': ['contextlab = contextlab.cli:main'],
    },
)
