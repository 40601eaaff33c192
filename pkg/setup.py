# !/usr/bin/env python
# This file shouldn't have further modifications. All config should be done in setup.cfg.
# It only exists so that `pip install -e .` works.
from setuptools import setup

setup()
