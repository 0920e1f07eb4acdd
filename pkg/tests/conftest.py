import pytest

SIZES = ('small', 'medium', 'large', 'exhaustive')


def pytest_addoption(parser):
    parser.addoption(
        "--test-size", action="store", default="large",
        help="run subset of tests: small, medium, large, exhaustive"
    )


def _size(config):
    size = config.getoption("test_size")
    if size not in SIZES:
        raise pytest.UsageError(f"--test-size must be one of {SIZES}")
    return SIZES.index(size)


def pytest_collection_modifyitems(config, items):
    if _size(config) == SIZES.index('exhaustive'):
        return
    skip = pytest.mark.skip(reason="long run: use --test-size=exhaustive")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_generate_tests(metafunc):
    size = _size(metafunc.config)

    if 'torus_n' in metafunc.fixturenames:
        if size == 0:
            metafunc.parametrize("torus_n", [7, 8])
        elif size < 3:
            metafunc.parametrize("torus_n", [7, 8, 9])
        else:
            metafunc.parametrize("torus_n", [7, 8, 9, 10])

    if 'oracle_pairs' in metafunc.fixturenames:
        metafunc.parametrize("oracle_pairs", [[500, 2000, 10000, 100000][size]])

    if 'seed' in metafunc.fixturenames:
        if size == 0:
            metafunc.parametrize("seed", [0])
        else:
            metafunc.parametrize("seed", [0, 1, 2])

    if 'workers' in metafunc.fixturenames:
        if size == 0:
            metafunc.parametrize("workers", [1])
        else:
            metafunc.parametrize("workers", [1, 2])


@pytest.fixture
def corpus_dir(tmp_path, monkeypatch):
    monkeypatch.setenv('TORUSFORGE_CACHE', str(tmp_path))
    return tmp_path
