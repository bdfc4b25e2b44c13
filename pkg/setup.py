from setuptools import setup, find_packages

setup(
    name = 'prnuauth',
    version = '0.1.0',
    package_dir = {'':'src'},
    packages = find_packages('src'),
    install_requires = ["numpy",
                        "scipy",
                        "PyWavelets",
                        "matplotlib",
                        "pandas"],
    scripts = ["scripts/prnuauth"],
    python_requires = '>=3.7',
    description = 'prnuauth - PRNU camera fingerprinting and second-factor camera authentication',
    license = 'Apache License Version 2.0',
    keywords = 'PRNU camera fingerprint forensics authentication deepfake',
    long_description = open('README.rst').read(),
    classifiers = [
        'Development Status :: 4 - Beta',
        'Topic :: Scientific/Engineering :: Image Processing',
        'Topic :: Security',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: Apache Software License',
    ],
)
