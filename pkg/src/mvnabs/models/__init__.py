"""Bundled example models and mappings, usable from code and from tests.

read() returns file text by name; path() gives a real filesystem path for
handing to the command line.
"""

from importlib import resources

_SUFFIXES = (".mvn", ".map")


def names() -> tuple[str, ...]:
    """The bundled file names, sorted."""
    found = [
        entry.name
        for entry in resources.files(__name__).iterdir()
        if entry.name.endswith(_SUFFIXES)
    ]
    return tuple(sorted(found))


def read(name: str) -> str:
    """The text of a bundled file, e.g. read("ex1.mvn")."""
    return resources.files(__name__).joinpath(name).read_text()


def path(name: str):
    """A context manager yielding a real path to a bundled file."""
    return resources.as_file(resources.files(__name__).joinpath(name))
