from .PresetProvider import PresetProvider