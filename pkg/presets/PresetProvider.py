import os

import yaml

from config import PRESETS_VERSION
from services.errors import ConfigError
from services.lattices.grid import make_grid
from services.lattices.models import Grid


class PresetProvider:
    """Встроенные решетки из presets/versions/v{version}.yaml."""

    def __init__(self, params: dict = None):
        params = params or {}
        self.version = params.get("version", PRESETS_VERSION)
        self.config = self._load_config()

    def _load_config(self) -> dict:
        config_path = os.path.join(os.path.dirname(__file__), "versions", f"v{self.version}.yaml")
        if not os.path.exists(config_path):
            raise ConfigError(f"Нет пресетов версии {self.version}")
        with open(config_path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)

    def grid_names(self) -> list:
        return sorted(self.config["grids"])

    def grid(self, name: str) -> Grid:
        entry = self.config["grids"].get(name)
        if entry is None:
            raise ConfigError(f"Неизвестная решетка '{name}', доступны: {', '.join(self.grid_names())}")
        return make_grid(entry["v1"], entry["v2"])
