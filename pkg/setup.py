# setup.py
from setuptools import setup, find_packages

setup(
    package_dir={"": "CREDITDEBATE/lib/python"},
    packages=find_packages(
        where="CREDITDEBATE/lib/python",
        exclude=["tests"],
    ),
    package_data={
        "credit_debate": ["prompts/*.j2", "prompts/roles/*.j2", "prompts/tasks/*.j2"],
        "credit_debate.guideline": ["factors.json"],
    },
)
