import pathlib

import pytest

from diffractkit.cli import main
from diffractkit.config import load_config

RECIPES = sorted((pathlib.Path(__file__).parent.parent / "recipes").glob("*.ini"))


def test_recipes_exist():
    assert len(RECIPES) >= 5


@pytest.mark.parametrize("path", RECIPES, ids=lambda p: p.stem)
def test_recipe_runs(path, tmp_path):
    cfg = load_config(path)
    assert main(["run", str(path), "--out-dir", str(tmp_path)]) == 0
    assert any(p.name.startswith(cfg.name) for p in tmp_path.iterdir())
