from .SumsCommand import SumsCommand