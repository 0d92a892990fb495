from .CommandProvider import CommandProvider