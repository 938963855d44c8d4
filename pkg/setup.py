#!/usr/bin/env python3
"""
Setup script for nilgeo
Creates a virtual environment, installs the numerical stack and checks that
the curvature engine runs in it
"""

import os
import subprocess
import sys

MIN_PYTHON = (3, 9)

# Import names of the pinned requirements
REQUIRED_MODULES = ("numpy", "scipy", "dotenv", "pytest", "hypothesis")

SMOKE_VERIFY = ("cli.py", "verify", "--pairs", "100", "--samples", "1000", "--format", "json")


def venv_tool(name):
    """Path of an executable inside the virtual environment"""
    if os.name == 'nt':  # Windows
        return os.path.join("venv", "Scripts", name)
    return os.path.join("venv", "bin", name)


def import_check_command(python=None):
    """Command that fails unless every required module imports"""
    imports = "; ".join(f"import {module}" for module in REQUIRED_MODULES)
    return [python or venv_tool("python"), "-c", imports]


def check_python_version(version=None):
    """Whether the running interpreter is new enough"""
    version = version or sys.version_info
    if tuple(version[:2]) < MIN_PYTHON:
        print(f"✗ nilgeo needs Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+, found {version[0]}.{version[1]}")
        return False
    return True


def create_virtual_environment():
    """Create Python virtual environment"""
    try:
        print("Creating virtual environment...")
        subprocess.run([sys.executable, "-m", "venv", "venv"], check=True)
        print("✓ Virtual environment created")
        return True
    except subprocess.CalledProcessError as e:
        print(f"✗ Failed to create virtual environment: {e}")
        return False


def install_dependencies():
    """Install the pinned requirements"""
    try:
        print("Installing numpy, scipy and the test tools...")
        subprocess.run([venv_tool("pip"), "install", "-r", "requirements.txt"], check=True)
        print("✓ Dependencies installed")
        return True
    except subprocess.CalledProcessError as e:
        print(f"✗ Failed to install dependencies: {e}")
        return False


def verify_installation():
    """Import the stack and run a short verification inside the venv"""
    try:
        subprocess.run(import_check_command(), check=True)
        print(f"✓ {', '.join(REQUIRED_MODULES)} import cleanly")
        result = subprocess.run([venv_tool("python"), *SMOKE_VERIFY], capture_output=True, text=True)
    except subprocess.CalledProcessError as e:
        print(f"✗ Installed packages do not import: {e}")
        return False
    if result.returncode != 0:
        print("✗ Short verification run failed:")
        print(result.stderr or result.stdout)
        return False
    print("✓ Short verification run passed")
    return True


def main():
    """Main setup function"""
    print("Setting up nilgeo...")

    if not check_python_version():
        sys.exit(1)

    if not create_virtual_environment():
        sys.exit(1)

    if not install_dependencies():
        sys.exit(1)

    if not verify_installation():
        sys.exit(1)

    print("\n✓ Setup completed successfully!")
    print("\nNext steps:")
    if os.name == 'nt':  # Windows
        print("1. Activate virtual environment: venv\\Scripts\\activate")
    else:  # Unix/Linux/macOS
        print("1. Activate virtual environment: source venv/bin/activate")
    print("2. Full verification of the published tables and formulas: python cli.py verify")
    print("3. Run the test suite: pytest")


if __name__ == "__main__":
    main()
