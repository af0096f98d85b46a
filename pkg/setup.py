from setuptools import setup

setup(
    name="defence_scheduler",
    version="1.0",
    description="Multi-objective scheduling of thesis defences: committees, days, slots, rooms",
    packages=["defence_scheduler"],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy",
    ],
    extras_require={
        "tests": ["pytest", "mock"],
    },
    entry_points={
        "console_scripts": ["defence_scheduler=defence_scheduler.cmd:main"]
    },
)
