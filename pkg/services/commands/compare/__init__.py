from .CompareCommand import CompareCommand