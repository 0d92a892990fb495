from .OrthoCommand import OrthoCommand