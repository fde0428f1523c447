from setuptools import setup, find_packages

setup(
    name="salflow",
    version="0.1.0",
    description="Video eye-fixation prediction with staged fully convolutional networks",
    author="SalFlow Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main", "config"],
    install_requires=[
        "numpy>=1.21.0",
        "Pillow>=9.1.0",
        "scipy>=1.7.0",
        "scikit-image>=0.19.0",
    ],
    entry_points={
        "console_scripts": [
            "salflow=main:main",
        ],
    },
    python_requires=">=3.8",
)
