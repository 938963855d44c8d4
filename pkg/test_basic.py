"""Basic test to verify setup works"""

import os


def test_basic():
    """Every module imports and the package is wired together"""
    import cli
    from nilgeo import algebra_core, berwald, config, curvature, errors, families, levi_civita, linalg, randers, workers

    assert cli.COMMANDS == tuple(cli.HANDLERS)
    assert issubclass(errors.ValidationFailed, errors.NilgeoError)
    assert config.DEFAULT_WORKERS >= 1


def test_setup_helpers():
    """The bootstrap script checks the interpreter and the installed stack"""
    import setup

    command = setup.import_check_command("python-under-test")
    assert command[:2] == ["python-under-test", "-c"]
    for module in ("numpy", "scipy", "dotenv", "pytest", "hypothesis"):
        assert f"import {module}" in command[2]
    assert setup.import_check_command()[0] == setup.venv_tool("python")
    assert setup.venv_tool("pip").startswith("venv" + os.sep)

    assert setup.check_python_version((3, 11, 4))
    assert not setup.check_python_version((3, 8, 18))
    assert setup.SMOKE_VERIFY[:2] == ("cli.py", "verify")


if __name__ == "__main__":
    test_basic()
    test_setup_helpers()
    print("Basic test passed!")
