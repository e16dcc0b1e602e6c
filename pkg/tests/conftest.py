import jsonschema
import pytest
from referencing import Registry, Resource

from infodistance.serialization import schema

SCHEMA_NAMES = ("distribution", "scenario", "chain", "evaluation", "classical", "optimizer", "axioms", "report")


@pytest.fixture(scope="session")
def validate():
    """``validate(instance, name)`` against a shipped schema, resolving cross references."""
    schemas = {name: schema(name) for name in SCHEMA_NAMES}
    registry = Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(s)) for name, s in schemas.items())

    def check(instance, name):
        cls = jsonschema.validators.validator_for(schemas[name])
        cls.check_schema(schemas[name])
        cls(schemas[name], registry=registry).validate(instance)

    return check


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _CRITERIA[number] = (title, "PASS" if call.excinfo is None else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status}  criterion {number:2d}: {title}")
