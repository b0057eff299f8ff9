from setuptools import setup, find_packages

setup(
    name="concept-align",
    version="0.1.0",
    packages=find_packages(include=['concept_align', 'concept_align.*']),
    package_data={'concept_align': ['schemas/*.json']},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.24.0",
        "pydantic>=2.0",
        "click>=8.0",
        "python-dotenv>=1.0.0",
        "pandas>=2.0.0",
        "tqdm>=4.65.0",
        "jsonschema>=4.18.0",
        "cachetools>=5.0.0",
    ],
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "concept-align=concept_align.main:cli",
        ],
    },
    description="تفسيرات تركيبية مثلى لعصبونات الشبكات العصبية مع بحث شعاعي وبحث شامل للمقارنة",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
)
