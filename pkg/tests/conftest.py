import pytest

from qgl3.catalog import SolutionData, load


@pytest.fixture(scope="session")
def catalog():
    return load()


@pytest.fixture(scope="session")
def solution_cache(catalog):
    cache: dict[str, SolutionData] = {}

    def get(solution_id: str) -> SolutionData:
        if solution_id not in cache:
            cache[solution_id] = SolutionData.from_record(catalog.get(solution_id))
        return cache[solution_id]

    return get
