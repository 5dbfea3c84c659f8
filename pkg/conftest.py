import pytest
from pathlib import Path
from markoff_lab.utils.helper import ReportUtils

DEFAULT_RUNSPEC = Path(__file__).parent / "inputs" / "verification.runspec.json"


def pytest_addoption(parser):
    """Add a command-line option for specifying the runspec file."""
    parser.addoption(
        "--runspec",
        action="store",
        default=str(DEFAULT_RUNSPEC),
        help="Path to the runspec JSON or YAML file",
    )


@pytest.fixture
def runspec_file(request):
    """Fixture to get the runspec file path from the command-line argument."""
    runspec_path = Path(request.config.getoption("--runspec"))
    if not runspec_path.exists():
        pytest.skip(f"Runspec file '{runspec_path}' not found.")
    return runspec_path


def load_suite_cases(runspec_file):
    """Load suite cases from the specified runspec file."""
    runspec_data = ReportUtils.read_runspec_file(runspec_file)
    return [(suite["name"], suite) for suite in runspec_data["suites"]]


def pytest_generate_tests(metafunc):
    """Dynamically parametrize tests based on the provided runspec file."""
    if "suite_name" in metafunc.fixturenames and "suite_case" in metafunc.fixturenames:
        runspec_file = Path(metafunc.config.getoption("--runspec"))
        if runspec_file.exists():
            suite_cases = load_suite_cases(runspec_file)
            metafunc.parametrize(
                "suite_name, suite_case", suite_cases, ids=[s[0] for s in suite_cases]
            )
