from .TheoryCommand import TheoryCommand