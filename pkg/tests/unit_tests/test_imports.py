"""Test importing files"""


def test_imports() -> None:
    """Test importing boundspanner modules."""
    from boundspanner import (
        artifacts,  # noqa: F401
        bench,  # noqa: F401
        commands,  # noqa: F401
        delaunay,  # noqa: F401
        distributed,  # noqa: F401
        geometry,  # noqa: F401
        lemmas,  # noqa: F401
        points,  # noqa: F401
        render,  # noqa: F401
        spanner,  # noqa: F401
        ui,  # noqa: F401
        verify,  # noqa: F401
    )
    from boundspanner.main import cli_main  # noqa: F401
