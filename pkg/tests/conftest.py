import glob
import os

import pytest
from click.testing import CliRunner

from staged_orders.cli import main

CONFIG_DIR = os.path.join(
    os.path.dirname(__file__), "..", "src", "staged_orders", "configs"
)

SHIPPED = (
    "sigma2",
    "family",
    "jump_cochain",
    "jump_antichain",
    "spectrum_ce",
    "spectrum_coce",
)


def shipped_config_path(name: str) -> str:
    return os.path.abspath(os.path.join(CONFIG_DIR, f"{name}.json"))


def build_run(config_name: str, out_dir: str) -> None:
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["build", "--config", shipped_config_path(config_name), "--out", out_dir],
        catch_exceptions=False,
    )
    assert result.exit_code == 0, result.output


@pytest.fixture(scope="session")
def shipped_runs(tmp_path_factory):
    """Every shipped config built once, keyed by config name."""
    root = tmp_path_factory.mktemp("shipped")
    out = {}
    for name in SHIPPED:
        target = str(root / name)
        build_run(name, target)
        out[name] = target
    return out


def run_snapshot_paths(run_dir: str):
    return sorted(glob.glob(os.path.join(run_dir, "snapshot_*.json")))
