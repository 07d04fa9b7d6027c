#!/usr/bin/env python3
"""
Check that the installed packages match what degenlab needs: pydantic 2,
click below 8.2 (CliRunner(mix_stderr=False) is used by the tests), numpy
with the Philox bit generator, and the test-only scipy and hypothesis.
"""

import sys


def _version_tuple(version: str):
    parts = []
    for piece in version.split('.')[:2]:
        digits = ''.join(ch for ch in piece if ch.isdigit())
        parts.append(int(digits or 0))
    return tuple(parts)


def check_versions():
    """Return (errors, warnings) for the runtime and test stack"""
    errors = []
    warnings = []

    try:
        import pydantic
        print(f"✓ pydantic version: {pydantic.VERSION}")
        if _version_tuple(pydantic.VERSION) < (2, 0):
            errors.append(f"pydantic {pydantic.VERSION} is too old; the schemas use the v2 API")
    except ImportError:
        errors.append("pydantic is not installed")

    try:
        import pydantic_settings  # noqa: F401
        print("✓ pydantic-settings is installed")
    except ImportError:
        errors.append("pydantic-settings is not installed")

    try:
        import click
        print(f"✓ Click version: {click.__version__}")
        if _version_tuple(click.__version__) >= (8, 2):
            warnings.append(
                f"Click {click.__version__} removed CliRunner(mix_stderr=...); test_cli.py needs <8.2.0"
            )
    except ImportError:
        errors.append("Click is not installed")

    try:
        import yaml
        print(f"✓ PyYAML version: {yaml.__version__}")
    except ImportError:
        errors.append("PyYAML is not installed (needed for @grids/ files)")

    try:
        import numpy as np
        print(f"✓ numpy version: {np.__version__}")
        np.random.Generator(np.random.Philox(0)).integers(0, 2 ** 53, size=1, dtype=np.uint64)
        print("✓ Philox bit generator is available")
    except ImportError:
        errors.append("numpy is not installed")
    except Exception as e:
        errors.append(f"numpy cannot draw 53-bit integers from Philox: {e}")

    for name in ("scipy", "hypothesis"):
        try:
            module = __import__(name)
            print(f"✓ {name} version: {module.__version__} (tests only)")
        except ImportError:
            warnings.append(f"{name} is not installed; the test suite needs it")

    return errors, warnings


def main():
    print("=" * 60)
    print("degenlab Dependency Verification")
    print("=" * 60)
    print()

    errors, warnings = check_versions()

    print()
    if warnings:
        print("⚠ Warnings:")
        for warning in warnings:
            print(f"  - {warning}")
        print()

    if errors:
        print("✗ Errors:")
        for error in errors:
            print(f"  - {error}")
        print()
        print("Dependencies check FAILED")
        return 1
    print("✓ All required dependencies are properly installed")
    if warnings:
        print("  (with some warnings - see above)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
