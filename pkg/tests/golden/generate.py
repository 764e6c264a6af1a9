"""Regenerate the CLI golden outputs (run from the repository root)."""
import json
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).parent


def main():
    commands = json.loads((HERE / "commands.json").read_text())
    for name, argv in commands.items():
        out = subprocess.run([sys.executable, "-m", "reprings.cli", *argv, "--format", "json"],
                             capture_output=True, text=True, check=True).stdout
        (HERE / f"{name}.json").write_text(out)


if __name__ == "__main__":
    main()
