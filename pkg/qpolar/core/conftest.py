import numpy as np
import pandas as pd
import pytest

from qpolar.core.channels import BscChannel
from qpolar.core.code import Q1Code
from qpolar.core.prep import NoiseModel


@pytest.fixture(autouse=True)
def add_namespace(doctest_namespace):
    doctest_namespace["np"] = np
    doctest_namespace["pd"] = pd
    doctest_namespace["BscChannel"] = BscChannel
    doctest_namespace["NoiseModel"] = NoiseModel
    doctest_namespace["Q1Code"] = Q1Code
