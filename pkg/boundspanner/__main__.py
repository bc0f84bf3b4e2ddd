"""Allow running the CLI as: python -m boundspanner."""

from boundspanner.main import cli_main

if __name__ == "__main__":
    cli_main()
