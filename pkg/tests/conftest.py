import pytest

from mvladders.adders import all_single_stage_designs
from mvladders.analysis import TimingModel


@pytest.fixture(scope="session")
def model():
    return TimingModel.default()


@pytest.fixture(scope="session")
def single_stage_designs():
    return all_single_stage_designs()


@pytest.fixture(scope="session")
def designs_by_label(single_stage_designs):
    return {d.label: d for d in single_stage_designs}
